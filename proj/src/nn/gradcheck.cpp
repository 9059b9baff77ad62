#include "tbandit/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tbandit::nn {

GradCheckResult finite_diff_check_against(const std::function<double()>& loss_value, std::span<Tensor> params,
                                          std::span<const std::vector<double>> analytic, double h, Rng& rng,
                                          std::size_t min_coordinates) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_check: h must be positive");
  if (analytic.size() != params.size()) throw std::invalid_argument("finite_diff_check: gradient list mismatch");

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (std::size_t i = 0; i < params[k].size(); ++i) coords.emplace_back(k, i);
  }
  // Partial Fisher-Yates picks a uniform subset.
  const std::size_t take = std::min(coords.size(), std::max<std::size_t>(min_coordinates, 1));
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + rng.uniform_index(coords.size() - i);
    std::swap(coords[i], coords[j]);
  }
  coords.resize(take);

  GradCheckResult result;
  NoGradGuard no_grad;
  for (const auto& [k, i] : coords) {
    auto values = params[k].mutable_values();
    const double original = values[i];
    values[i] = original + h;
    const double plus = loss_value();
    values[i] = original - h;
    const double minus = loss_value();
    values[i] = original;
    const double numeric = (plus - minus) / (2.0 * h);
    const double exact = analytic[k][i];
    const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-8});
    result.max_relative_error = std::max(result.max_relative_error, std::abs(exact - numeric) / denom);
    ++result.coordinates_checked;
  }
  return result;
}

GradCheckResult finite_diff_check(const std::function<Tensor()>& loss_fn, std::span<Tensor> params, double h,
                                  Rng& rng, std::size_t min_coordinates) {
  for (Tensor& p : params) p.zero_grad();
  loss_fn().backward();
  std::vector<std::vector<double>> analytic;
  for (Tensor& p : params) {
    p.mutable_grad();
    analytic.emplace_back(p.grad().begin(), p.grad().end());
  }
  return finite_diff_check_against([&] { return loss_fn().item(); }, params, analytic, h, rng, min_coordinates);
}

}  // namespace tbandit::nn
