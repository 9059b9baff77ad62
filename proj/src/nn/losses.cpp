#include "tbandit/nn/losses.hpp"

#include <stdexcept>
#include <string>

namespace tbandit::nn {
namespace {

void check_pair(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

}  // namespace

Tensor gaussian_reparameterize(const Tensor& mean, const Tensor& log_std, Rng& rng) {
  std::vector<double> eps(mean.size());
  for (double& e : eps) e = rng.normal();
  return gaussian_reparameterize(mean, log_std, Tensor::from_values(mean.rows(), mean.cols(), std::move(eps)));
}

Tensor gaussian_reparameterize(const Tensor& mean, const Tensor& log_std, const Tensor& noise) {
  check_pair(mean, log_std, "gaussian_reparameterize");
  check_pair(mean, noise, "gaussian_reparameterize");
  return mean + exp(log_std) * noise;
}

Tensor kl_diag_standard(const Tensor& mean, const Tensor& log_std) {
  check_pair(mean, log_std, "kl_diag_standard");
  // 1/2 (mu^2 + sigma^2 - 1 - 2 log sigma)
  return sum(square(mean) + exp(log_std * 2.0) - log_std * 2.0 + (-1.0)) * 0.5;
}

Tensor gaussian_nll(const Tensor& target, const Tensor& mean, const Tensor& log_std) {
  check_pair(target, mean, "gaussian_nll");
  check_pair(mean, log_std, "gaussian_nll");
  const Tensor residual = target - mean;
  const Tensor quad = square(residual) * exp(log_std * -2.0) * 0.5;
  return sum(quad + log_std + kHalfLog2Pi);
}

}  // namespace tbandit::nn
