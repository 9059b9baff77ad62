#include "tbandit/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace tbandit::nn {
namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> bytes;
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  os.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  os.write(bytes.data(), bytes.size());
}

std::uint64_t get_bytes(std::istream& is, int n) {
  std::array<unsigned char, 8> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!is) throw std::runtime_error("checkpoint: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& os, const Mlp& mlp) {
  const MlpSpec& spec = mlp.spec();
  put_u32(os, static_cast<std::uint32_t>(spec.layer_widths.size()));
  for (std::size_t w : spec.layer_widths) put_u32(os, static_cast<std::uint32_t>(w));
  put_u32(os, static_cast<std::uint32_t>(spec.activation));
  put_u32(os, static_cast<std::uint32_t>(spec.head));
  for (const Tensor& p : mlp.parameters()) {
    for (double v : p.values()) put_f64(os, v);
  }
}

Mlp load_checkpoint(std::istream& is) {
  MlpSpec spec;
  const auto n = static_cast<std::uint32_t>(get_bytes(is, 4));
  if (n < 2 || n > 1024) throw std::runtime_error("checkpoint: implausible layer count");
  for (std::uint32_t i = 0; i < n; ++i) spec.layer_widths.push_back(static_cast<std::size_t>(get_bytes(is, 4)));
  const auto activation = static_cast<std::uint32_t>(get_bytes(is, 4));
  const auto head = static_cast<std::uint32_t>(get_bytes(is, 4));
  if (activation > 2 || head > 1) throw std::runtime_error("checkpoint: unknown activation or head code");
  spec.activation = static_cast<Activation>(activation);
  spec.head = static_cast<Head>(head);
  spec.validate();

  std::vector<Tensor> params;
  const std::size_t layers = n - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec.layer_widths[l];
    std::size_t out = spec.layer_widths[l + 1];
    if (l + 1 == layers && spec.head == Head::GaussianDiag) out *= 2;
    for (auto [rows, cols] : {std::pair{in, out}, std::pair{std::size_t{1}, out}}) {
      std::vector<double> values(rows * cols);
      for (double& v : values) v = std::bit_cast<double>(get_bytes(is, 8));
      params.push_back(Tensor::from_values(rows, cols, std::move(values), true));
    }
  }
  return Mlp(std::move(spec), std::move(params));
}

}  // namespace tbandit::nn
