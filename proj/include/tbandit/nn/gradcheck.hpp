#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "tbandit/core/rng.hpp"
#include "tbandit/nn/tensor.hpp"

namespace tbandit::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates_checked = 0;
};

/// Compares backward() gradients of loss_fn against central differences
/// (f(p+h) - f(p-h)) / 2h on a random subset of at least min_coordinates
/// parameter coordinates (all of them when there are fewer). Relative error
/// uses the denominator max(|analytic|, |numeric|, 1e-8). loss_fn must be
/// deterministic; fix any noise it draws.
GradCheckResult finite_diff_check(const std::function<Tensor()>& loss_fn, std::span<Tensor> params, double h,
                                  Rng& rng, std::size_t min_coordinates = 50);

/// Variant that checks caller-supplied gradients instead of backward().
/// Used to confirm the check detects a corrupted gradient.
GradCheckResult finite_diff_check_against(const std::function<double()>& loss_value, std::span<Tensor> params,
                                          std::span<const std::vector<double>> analytic, double h, Rng& rng,
                                          std::size_t min_coordinates = 50);

}  // namespace tbandit::nn
