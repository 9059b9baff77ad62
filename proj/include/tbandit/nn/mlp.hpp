#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tbandit/core/rng.hpp"
#include "tbandit/nn/tensor.hpp"

namespace tbandit::nn {

enum class Activation : std::uint32_t { ReLU = 0, ELU = 1, Tanh = 2 };
enum class Head : std::uint32_t { GaussianDiag = 0, Deterministic = 1 };

/// layer_widths = {input, hidden..., output}. A GaussianDiag head doubles the
/// final affine layer to emit a mean and a log-std per output dimension.
struct MlpSpec {
  std::vector<std::size_t> layer_widths;
  Activation activation = Activation::ELU;
  Head head = Head::GaussianDiag;

  std::size_t input_dim() const { return layer_widths.front(); }
  std::size_t output_dim() const { return layer_widths.back(); }
  void validate() const;
  bool operator==(const MlpSpec&) const = default;
};

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

struct GaussianOutput {
  Tensor mean;
  Tensor log_std;  // clamped to [kLogStdMin, kLogStdMax]
};

/// Dense MLP with fan-in-scaled uniform weights and zero biases. Copying an
/// Mlp deep-copies its parameters.
class Mlp {
 public:
  Mlp(MlpSpec spec, Rng& init_rng);
  /// Parameters supplied in layer order: W_0 (in x out), b_0 (1 x out), ...
  Mlp(MlpSpec spec, std::vector<Tensor> parameters);

  Mlp(const Mlp& other);
  Mlp& operator=(const Mlp& other);
  Mlp(Mlp&&) noexcept = default;
  Mlp& operator=(Mlp&&) noexcept = default;

  /// Affine layers with activations between them; returns the raw final
  /// layer (width output or 2 * output for a Gaussian head).
  Tensor forward(const Tensor& input) const;
  GaussianOutput forward_gaussian(const Tensor& input) const;

  const MlpSpec& spec() const { return spec_; }
  /// Handles to W_0, b_0, W_1, b_1, ...
  const std::vector<Tensor>& parameters() const { return params_; }
  std::size_t parameter_count() const;
  std::size_t num_layers() const { return params_.size() / 2; }

 private:
  std::size_t final_width() const;

  MlpSpec spec_;
  std::vector<Tensor> params_;
};

}  // namespace tbandit::nn
