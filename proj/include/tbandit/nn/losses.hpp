#pragma once

#include "tbandit/core/rng.hpp"
#include "tbandit/nn/tensor.hpp"

namespace tbandit::nn {

/// mean + exp(log_std) * eps with eps ~ N(0, I) drawn from rng. The noise is
/// a constant, so gradients flow only through mean and log_std.
Tensor gaussian_reparameterize(const Tensor& mean, const Tensor& log_std, Rng& rng);

/// Same, with caller-supplied noise (same shape as mean).
Tensor gaussian_reparameterize(const Tensor& mean, const Tensor& log_std, const Tensor& noise);

/// KL(N(mean, diag(exp(2 log_std))) || N(0, I)) summed over every entry.
Tensor kl_diag_standard(const Tensor& mean, const Tensor& log_std);

/// Negative Gaussian log-density of target summed over every entry.
Tensor gaussian_nll(const Tensor& target, const Tensor& mean, const Tensor& log_std);

/// ln(2 pi) / 2.
inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

}  // namespace tbandit::nn
