#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tbandit/core/dataset.hpp"
#include "tbandit/core/rng.hpp"
#include "tbandit/nn/mlp.hpp"
#include "tbandit/nn/tensor.hpp"

namespace tbandit::vae {

struct VaeArchitecture {
  std::size_t dim_w = 1;
  std::size_t dim_z = 1;
  std::vector<std::size_t> hidden{30, 30, 30};
  nn::Activation activation = nn::Activation::ELU;
  double beta = 0.1;
  std::size_t num_arms = 2;

  void validate() const;
};

/// Encoder q(z|w), proxy decoder p(w|z) and one reward decoder p(y|z) per arm.
/// Copies are deep.
class VaeModel {
 public:
  VaeModel(VaeArchitecture arch, Rng& init_rng);

  const VaeArchitecture& architecture() const { return arch_; }
  double beta() const { return arch_.beta; }
  std::size_t dim_w() const { return arch_.dim_w; }
  std::size_t dim_z() const { return arch_.dim_z; }
  std::size_t num_arms() const { return arch_.num_arms; }

  const nn::Mlp& encoder() const { return encoder_; }
  const nn::Mlp& decoder_w() const { return decoder_w_; }
  const nn::Mlp& decoder_y(Arm x) const { return decoder_y_.at(x); }
  nn::Mlp& encoder() { return encoder_; }
  nn::Mlp& decoder_w() { return decoder_w_; }
  nn::Mlp& decoder_y(Arm x) { return decoder_y_.at(x); }

  /// Encoder, decoder_w, decoder_y[0], decoder_y[1], ... in that order.
  std::vector<nn::Tensor> parameters() const;
  std::vector<nn::Tensor> decoder_parameters() const;

  /// Values of every parameter, flattened in parameters() order.
  std::vector<double> flat_values() const;
  void set_flat_values(std::span<const double> values);

 private:
  VaeArchitecture arch_;
  nn::Mlp encoder_;
  nn::Mlp decoder_w_;
  std::vector<nn::Mlp> decoder_y_;
};

/// Row-stacked records (w, x, y).
struct Batch {
  nn::Tensor w;  // n x dim_w
  std::vector<Arm> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
};

struct Record {
  std::vector<double> w;
  Arm x = 0;
  double y = 0.0;
};

Batch make_batch(std::span<const Record> records);
Batch make_batch(const PriorDataset& data, std::span<const std::size_t> rows);
/// Stacked true contexts of the chosen rows.
nn::Tensor stack_contexts(const PriorDataset& data, std::span<const std::size_t> rows);

/// Summed Gaussian NLL of y under the per-arm reward decoders at latent z.
nn::Tensor reward_nll(const VaeModel& model, const nn::Tensor& z, std::span<const Arm> x, std::span<const double> y);

/// Batch mean of nll_w + nll_y + beta * KL(q(z|w) || N(0, I)) with z drawn
/// by reparameterization. The negated transfer ELBO; minimized.
nn::Tensor elbo_transfer_loss(const VaeModel& model, const Batch& batch, Rng& rng);
/// Same, with the reparameterization noise supplied (n x dim_z).
nn::Tensor elbo_transfer_loss(const VaeModel& model, const Batch& batch, const nn::Tensor& noise);

/// Batch mean of nll_w + nll_y given the true contexts (decoders only).
nn::Tensor decoder_loss(const VaeModel& model, const Batch& batch, const nn::Tensor& z);

/// Encoder posterior mean for a single proxy.
std::vector<double> posterior_mean(const VaeModel& model, std::span<const double> w);

/// Greedy arm under the reward decoders at the encoder posterior mean, or at
/// a posterior draw when rng is given. Ties go to the lower arm.
Arm act(const VaeModel& model, std::span<const double> w, Rng* sample_rng = nullptr);

}  // namespace tbandit::vae
