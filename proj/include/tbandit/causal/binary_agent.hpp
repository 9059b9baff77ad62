#pragma once

#include <array>
#include <cstddef>

#include "tbandit/core/dataset.hpp"
#include "tbandit/core/error.hpp"

namespace tbandit::causal {

/// The source CPT p(w=1|z) does not separate the two contexts, so the target
/// context marginal cannot be recovered from the proxy marginal.
class UninformativeProxyError : public RuntimeAbort {
 public:
  using RuntimeAbort::RuntimeAbort;
};

/// Transport-formula agent for the binary model.
///
/// Source quantities (fixed after fit_prior): the proxy CPT p(w=1|z) and the
/// reward table E[Y|z,x]. Target quantities (updated online): the running
/// proxy marginal p*(w=1) and the context marginal p*(z=1) recovered from it.
struct BinaryCausalState {
  std::array<double, 2> cpt_w{};                          // p(w=1 | z), smoothed
  std::array<std::array<double, 2>, 2> reward_table{};    // [z][x] -> E[Y | z, x]
  std::array<std::array<bool, 2>, 2> reward_imputed{};    // cell had no records
  std::size_t w1_count = 0;
  std::size_t t = 0;
  double pz1_hat = 0.5;
  double smoothing = 1.0;

  double proxy_marginal() const;  // w1_count / t
};

/// Estimates the CPT with Laplace pseudo-count `smoothing` and the reward
/// table by cell means; empty reward cells take the global mean and are flagged.
BinaryCausalState fit_prior(const PriorDataset& data, double smoothing = 1.0);

void update_proxy_marginal(BinaryCausalState& state, int w);

/// Inverts p*(w=1) = p(w=1|z=0)(1 - p*(z=1)) + p(w=1|z=1) p*(z=1), clamps to
/// [0, 1] and stores the result in pz1_hat.
double estimate_target_pz(BinaryCausalState& state);
/// Same, from a supplied p*(w=1) instead of the running count.
double estimate_target_pz(BinaryCausalState& state, double proxy_marginal);

/// Unclamped inversion; exposed for diagnostics and tests.
double invert_proxy_marginal(const std::array<double, 2>& cpt_w, double proxy_marginal);

/// p*(z=1 | w) by Bayes' rule with the model-implied proxy marginal.
double posterior_z_given_w(const BinaryCausalState& state, int w);

/// sum_z E[Y | z, x] p*(z | w).
double transported_reward(const BinaryCausalState& state, int w, Arm x);

/// One agent step: record w, refresh p*(z=1), act greedily on the
/// transported reward (ties to the lower arm).
Arm act(BinaryCausalState& state, int w);

inline constexpr double kMinCptSeparation = 1e-6;

}  // namespace tbandit::causal
