#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tbandit/core/dataset.hpp"
#include "tbandit/core/rng.hpp"

namespace tbandit::env {

enum class Variant { Binary, LinearGaussian, NonlinearProxy };

/// Sign restriction applied to coordinate 0 of a Gaussian context.
enum class Truncation { None, PositiveOnly, NegativeOnly };

std::string to_string(Variant v);
std::string to_string(Truncation t);

/// The only parameters allowed to differ between a source and a target domain.
struct ContextParams {
  double c = 0.5;                    // Binary: P(z = 1)
  std::vector<double> mean;          // Gaussian variants: mean of z, unit covariance
  Truncation truncation = Truncation::None;

  static ContextParams bernoulli(double c) { return {c, {}, Truncation::None}; }
  static ContextParams gaussian(std::vector<double> mean, Truncation t = Truncation::None) {
    return {0.5, std::move(mean), t};
  }
};

struct ProxyParams {
  std::size_t dim_w = 1;
  // LinearGaussian: w = a (.) z + b + eps, eps ~ N(0, I).
  std::vector<double> a;
  std::vector<double> b;
  // NonlinearProxy: w = gain * g(z) + eps, g a frozen tanh MLP.
  std::uint64_t generator_seed = 0;
  std::vector<std::size_t> hidden_widths{32, 32};
  double output_gain = 1.0;
  double noise_std = 0.1;
};

struct RewardParams {
  double threshold = 5.0;  // LinearGaussian
  double scale = 1.0;      // NonlinearProxy
};

/// Frozen random MLP z -> w used by the NonlinearProxy variant. Weights are
/// drawn once from the generator seed.
class ProxyGenerator {
 public:
  ProxyGenerator(std::size_t dim_z, const ProxyParams& params);

  /// Writes gain * g(z) into out (size dim_w).
  void apply(std::span<const double> z, std::span<double> out) const;
  std::size_t dim_z() const { return dim_z_; }
  std::size_t dim_w() const { return dim_w_; }

 private:
  struct Layer {
    std::size_t in = 0, out = 0;
    std::vector<double> weight;  // out x in, row-major
    std::vector<double> bias;
  };
  std::size_t dim_z_;
  std::size_t dim_w_;
  double gain_;
  std::vector<Layer> layers_;
};

/// One domain's structural causal model. Immutable after construction.
class DomainSpec {
 public:
  static DomainSpec binary(double c);
  static DomainSpec linear_gaussian(ContextParams context, ProxyParams proxy, RewardParams reward = {});
  static DomainSpec nonlinear_proxy(ContextParams context, ProxyParams proxy, RewardParams reward = {});

  /// Same proxy and reward mechanisms, different context distribution.
  DomainSpec with_context(ContextParams context) const;

  Variant variant() const { return variant_; }
  const ContextParams& context() const { return context_; }
  const ProxyParams& proxy() const { return proxy_; }
  const RewardParams& reward() const { return reward_; }
  std::size_t num_arms() const { return 2; }
  std::size_t dim_z() const { return dim_z_; }
  std::size_t dim_w() const { return proxy_.dim_w; }
  const ProxyGenerator* generator() const { return generator_.get(); }
  std::string tag() const;

  /// True when both specs share the proxy and reward mechanisms.
  bool same_mechanisms(const DomainSpec& other) const;

 private:
  DomainSpec() = default;
  void validate_context(const ContextParams& context) const;

  Variant variant_ = Variant::Binary;
  ContextParams context_;
  ProxyParams proxy_;
  RewardParams reward_;
  std::size_t dim_z_ = 1;
  std::shared_ptr<const ProxyGenerator> generator_;
};

/// Source/target domains satisfying covariate shift on Z only.
struct DomainPair {
  DomainSpec source;
  DomainSpec target;
};

DomainPair make_domain_pair(const DomainSpec& mechanisms, ContextParams source, ContextParams target);

struct ContextProxyPair {
  std::vector<double> z;
  std::vector<double> w;
};

struct OptimalArm {
  Arm arm = 0;
  double value = 0.0;
};

/// Behavior policy that chose the arms recorded in the prior dataset.
struct BehaviorPolicy {
  double logistic_offset = 0.5;  // continuous: P(x=1) = sigmoid(z0 + offset)
  double binary_base = 0.3;      // binary: P(x=1) = base + slope * z
  double binary_slope = 0.4;

  double propensity(const DomainSpec& spec, std::span<const double> z) const;
};

std::vector<double> sample_context(const DomainSpec& spec, Rng& rng);
std::vector<double> sample_proxy(const DomainSpec& spec, std::span<const double> z, Rng& rng);
ContextProxyPair sample_context_proxy(const DomainSpec& spec, Rng& rng);

double sample_reward(const DomainSpec& spec, std::span<const double> z, Arm x, Rng& rng);
double expected_reward(const DomainSpec& spec, std::span<const double> z, Arm x);
OptimalArm optimal_arm(const DomainSpec& spec, std::span<const double> z);

PriorDataset generate_prior_dataset(const DomainSpec& source, const BehaviorPolicy& policy,
                                    std::size_t n, Rng& rng);

/// Attempts allowed when rejection-sampling a truncated context.
inline constexpr std::size_t kMaxTruncationAttempts = 1'000'000;

}  // namespace tbandit::env
