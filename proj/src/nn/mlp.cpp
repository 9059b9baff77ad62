#include "tbandit/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tbandit::nn {

void MlpSpec::validate() const {
  if (layer_widths.size() < 2) throw std::invalid_argument("MlpSpec: need at least input and output widths");
  for (std::size_t w : layer_widths) {
    if (w == 0) throw std::invalid_argument("MlpSpec: layer widths must be >= 1");
  }
}

std::size_t Mlp::final_width() const {
  return spec_.head == Head::GaussianDiag ? 2 * spec_.output_dim() : spec_.output_dim();
}

Mlp::Mlp(MlpSpec spec, Rng& init_rng) : spec_(std::move(spec)) {
  spec_.validate();
  const std::size_t layers = spec_.layer_widths.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec_.layer_widths[l];
    const std::size_t out = (l + 1 == layers) ? final_width() : spec_.layer_widths[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::vector<double> w(in * out);
    for (double& v : w) v = bound * (2.0 * init_rng.uniform() - 1.0);
    params_.push_back(Tensor::from_values(in, out, std::move(w), true));
    params_.push_back(Tensor::zeros(1, out, true));
  }
}

Mlp::Mlp(MlpSpec spec, std::vector<Tensor> parameters) : spec_(std::move(spec)), params_(std::move(parameters)) {
  spec_.validate();
  const std::size_t layers = spec_.layer_widths.size() - 1;
  if (params_.size() != 2 * layers) throw std::invalid_argument("Mlp: wrong number of parameter tensors");
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec_.layer_widths[l];
    const std::size_t out = (l + 1 == layers) ? final_width() : spec_.layer_widths[l + 1];
    const Tensor& w = params_[2 * l];
    const Tensor& b = params_[2 * l + 1];
    if (w.rows() != in || w.cols() != out || b.rows() != 1 || b.cols() != out) {
      throw std::invalid_argument("Mlp: parameter shape mismatch in layer " + std::to_string(l));
    }
  }
}

Mlp::Mlp(const Mlp& other) : spec_(other.spec_) {
  params_.reserve(other.params_.size());
  for (const Tensor& p : other.params_) params_.push_back(p.clone());
}

Mlp& Mlp::operator=(const Mlp& other) {
  if (this != &other) {
    Mlp copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Tensor Mlp::forward(const Tensor& input) const {
  if (input.cols() != spec_.input_dim()) {
    throw std::invalid_argument("Mlp::forward: input width " + std::to_string(input.cols()) + " != " +
                                std::to_string(spec_.input_dim()));
  }
  Tensor h = input;
  const std::size_t layers = num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    h = matmul(h, params_[2 * l]) + params_[2 * l + 1];
    if (l + 1 < layers) {
      switch (spec_.activation) {
        case Activation::ReLU: h = relu(h); break;
        case Activation::ELU: h = elu(h); break;
        case Activation::Tanh: h = tanh(h); break;
      }
    }
  }
  return h;
}

GaussianOutput Mlp::forward_gaussian(const Tensor& input) const {
  if (spec_.head != Head::GaussianDiag) throw std::logic_error("Mlp::forward_gaussian: deterministic head");
  const Tensor raw = forward(input);
  const std::size_t d = spec_.output_dim();
  return {slice_cols(raw, 0, d), clamp(slice_cols(raw, d, d), kLogStdMin, kLogStdMax)};
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor& p : params_) n += p.size();
  return n;
}

}  // namespace tbandit::nn
