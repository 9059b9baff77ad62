#include "tbandit/causal/binary_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tbandit::causal {
namespace {

int as_bit(double v) { return v > 0.5 ? 1 : 0; }

void check_bit(int w) {
  if (w != 0 && w != 1) throw std::invalid_argument("binary causal agent: proxy must be 0 or 1");
}

}  // namespace

double BinaryCausalState::proxy_marginal() const {
  if (t == 0) throw std::logic_error("proxy marginal undefined before the first target step");
  return static_cast<double>(w1_count) / static_cast<double>(t);
}

BinaryCausalState fit_prior(const PriorDataset& data, double smoothing) {
  if (data.empty()) throw std::invalid_argument("fit_prior: prior dataset is empty");
  if (data.dim_w() != 1 || data.dim_z() != 1) throw std::invalid_argument("fit_prior: binary data expected");
  if (!(smoothing >= 0.0)) throw std::invalid_argument("fit_prior: smoothing must be >= 0");

  std::array<double, 2> z_count{}, w1_given_z{};
  std::array<std::array<double, 2>, 2> y_sum{}, xz_count{};
  double y_total = 0.0;
  for (const PriorSample& s : data) {
    if (s.x > 1) throw std::invalid_argument("fit_prior: arm out of range");
    const int z = as_bit(s.z[0]);
    z_count[z] += 1.0;
    w1_given_z[z] += static_cast<double>(as_bit(s.w[0]));
    y_sum[z][s.x] += s.y;
    xz_count[z][s.x] += 1.0;
    y_total += s.y;
  }

  BinaryCausalState state;
  state.smoothing = smoothing;
  for (int z = 0; z < 2; ++z) {
    const double denom = z_count[z] + 2.0 * smoothing;
    if (denom == 0.0) throw std::invalid_argument("fit_prior: no records with z = " + std::to_string(z));
    state.cpt_w[z] = (w1_given_z[z] + smoothing) / denom;
  }
  const double global_mean = y_total / static_cast<double>(data.size());
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x) {
      if (xz_count[z][x] > 0.0) {
        state.reward_table[z][x] = y_sum[z][x] / xz_count[z][x];
      } else {
        state.reward_table[z][x] = global_mean;
        state.reward_imputed[z][x] = true;
      }
    }
  }
  return state;
}

void update_proxy_marginal(BinaryCausalState& state, int w) {
  check_bit(w);
  ++state.t;
  state.w1_count += static_cast<std::size_t>(w);
}

double invert_proxy_marginal(const std::array<double, 2>& cpt_w, double proxy_marginal) {
  const double separation = cpt_w[1] - cpt_w[0];
  if (std::abs(separation) < kMinCptSeparation) {
    throw UninformativeProxyError("p(w=1|z=1) and p(w=1|z=0) coincide; p*(z) is not identifiable");
  }
  return (proxy_marginal - cpt_w[0]) / separation;
}

double estimate_target_pz(BinaryCausalState& state, double proxy_marginal) {
  state.pz1_hat = std::clamp(invert_proxy_marginal(state.cpt_w, proxy_marginal), 0.0, 1.0);
  return state.pz1_hat;
}

double estimate_target_pz(BinaryCausalState& state) { return estimate_target_pz(state, state.proxy_marginal()); }

double posterior_z_given_w(const BinaryCausalState& state, int w) {
  check_bit(w);
  const double lik1 = w == 1 ? state.cpt_w[1] : 1.0 - state.cpt_w[1];
  const double lik0 = w == 1 ? state.cpt_w[0] : 1.0 - state.cpt_w[0];
  const double joint1 = lik1 * state.pz1_hat;
  const double marginal = joint1 + lik0 * (1.0 - state.pz1_hat);
  if (!(marginal > 0.0)) throw RuntimeAbort("posterior_z_given_w: observed proxy has zero model probability");
  return joint1 / marginal;
}

double transported_reward(const BinaryCausalState& state, int w, Arm x) {
  if (x > 1) throw std::out_of_range("transported_reward: arm out of range");
  const double post1 = posterior_z_given_w(state, w);
  return state.reward_table[0][x] * (1.0 - post1) + state.reward_table[1][x] * post1;
}

Arm act(BinaryCausalState& state, int w) {
  update_proxy_marginal(state, w);
  estimate_target_pz(state);
  const double r0 = transported_reward(state, w, 0);
  const double r1 = transported_reward(state, w, 1);
  return r1 > r0 ? 1 : 0;
}

}  // namespace tbandit::causal
