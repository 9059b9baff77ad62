#include <cmath>
#include <stdexcept>

#include "tbandit/core/error.hpp"
#include "tbandit/env/domain.hpp"

namespace tbandit::env {
namespace {

bool satisfies(Truncation t, double z0) {
  switch (t) {
    case Truncation::None: return true;
    case Truncation::PositiveOnly: return z0 >= 0.0;
    case Truncation::NegativeOnly: return z0 < 0.0;
  }
  return true;
}

void check_arm(const DomainSpec& spec, Arm x) {
  if (x >= spec.num_arms()) throw std::out_of_range("arm index out of range");
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

std::vector<double> sample_context(const DomainSpec& spec, Rng& rng) {
  const ContextParams& ctx = spec.context();
  if (spec.variant() == Variant::Binary) return {rng.bernoulli(ctx.c) ? 1.0 : 0.0};

  std::vector<double> z(spec.dim_z());
  for (std::size_t attempt = 0; attempt < kMaxTruncationAttempts; ++attempt) {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = ctx.mean[i] + rng.normal();
    if (satisfies(ctx.truncation, z[0])) return z;
  }
  throw RuntimeAbort("truncated context: rejection sampling exceeded attempt limit for " + spec.tag());
}

std::vector<double> sample_proxy(const DomainSpec& spec, std::span<const double> z, Rng& rng) {
  const ProxyParams& proxy = spec.proxy();
  std::vector<double> w(proxy.dim_w);
  switch (spec.variant()) {
    case Variant::Binary: {
      const double p = z[0] > 0.5 ? 0.8 : 0.1;
      w[0] = rng.bernoulli(p) ? 1.0 : 0.0;
      break;
    }
    case Variant::LinearGaussian: {
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double zi = spec.dim_z() == 1 ? z[0] : z[i];
        w[i] = proxy.a[i] * zi + proxy.b[i] + rng.normal();
      }
      break;
    }
    case Variant::NonlinearProxy: {
      spec.generator()->apply(z, w);
      for (double& v : w) v += proxy.noise_std * rng.normal();
      break;
    }
  }
  return w;
}

ContextProxyPair sample_context_proxy(const DomainSpec& spec, Rng& rng) {
  ContextProxyPair pair;
  pair.z = sample_context(spec, rng);
  pair.w = sample_proxy(spec, pair.z, rng);
  return pair;
}

double expected_reward(const DomainSpec& spec, std::span<const double> z, Arm x) {
  check_arm(spec, x);
  switch (spec.variant()) {
    case Variant::Binary: {
      const bool zb = z[0] > 0.5;
      return (zb != (x == 1)) ? 1.0 : 0.0;
    }
    case Variant::LinearGaussian: {
      const bool high = z[0] >= spec.reward().threshold;
      return ((high && x == 0) || (!high && x == 1)) ? 1.0 : 0.0;
    }
    case Variant::NonlinearProxy:
      return z[0] * (2.0 * static_cast<double>(x) - 1.0) * spec.reward().scale;
  }
  return 0.0;
}

double sample_reward(const DomainSpec& spec, std::span<const double> z, Arm x, Rng& rng) {
  const double mean = expected_reward(spec, z, x);
  if (spec.variant() == Variant::NonlinearProxy) return mean + rng.normal();
  return mean;
}

OptimalArm optimal_arm(const DomainSpec& spec, std::span<const double> z) {
  OptimalArm best{0, expected_reward(spec, z, 0)};
  for (Arm x = 1; x < spec.num_arms(); ++x) {
    const double value = expected_reward(spec, z, x);
    if (value > best.value) best = {x, value};
  }
  return best;
}

double BehaviorPolicy::propensity(const DomainSpec& spec, std::span<const double> z) const {
  if (spec.variant() == Variant::Binary) return binary_base + binary_slope * z[0];
  return sigmoid(z[0] + logistic_offset);
}

PriorDataset generate_prior_dataset(const DomainSpec& source, const BehaviorPolicy& policy,
                                    std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("generate_prior_dataset: N must be >= 1");
  PriorDataset data(source.tag());
  for (std::size_t i = 0; i < n; ++i) {
    ContextProxyPair pair = sample_context_proxy(source, rng);
    const Arm x = rng.bernoulli(policy.propensity(source, pair.z)) ? 1 : 0;
    const double y = sample_reward(source, pair.z, x, rng);
    data.push_back({std::move(pair.w), std::move(pair.z), x, y});
  }
  return data;
}

}  // namespace tbandit::env
