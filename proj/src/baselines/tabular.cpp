#include "tbandit/baselines/tabular.hpp"

#include <cmath>
#include <stdexcept>

namespace tbandit::baselines {

std::size_t TabularBanditState::cell(std::span<const double> w) {
  if (w.size() != 1) throw std::invalid_argument("tabular bandit: expects a scalar binary proxy");
  return w[0] > 0.5 ? 1 : 0;
}

double ucb_index(double mean, std::size_t count, std::size_t t) {
  return mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(count));
}

Arm ucb_select(const TabularBanditState& state, std::span<const double> w, std::size_t t) {
  if (t < 1) throw std::invalid_argument("ucb_select: t must be >= 1");
  const std::size_t c = TabularBanditState::cell(w);
  for (Arm x = 0; x < TabularBanditState::kArms; ++x) {
    if (state.counts[c][x] == 0) return x;
  }
  Arm best = 0;
  double best_index = ucb_index(state.means[c][0], state.counts[c][0], t);
  for (Arm x = 1; x < TabularBanditState::kArms; ++x) {
    const double index = ucb_index(state.means[c][x], state.counts[c][x], t);
    if (index > best_index) {
      best = x;
      best_index = index;
    }
  }
  return best;
}

Arm ts_select(const TabularBanditState& state, std::span<const double> w, Rng& rng) {
  const std::size_t c = TabularBanditState::cell(w);
  Arm best = 0;
  double best_draw = rng.beta(state.alpha[c][0], state.beta[c][0]);
  for (Arm x = 1; x < TabularBanditState::kArms; ++x) {
    const double draw = rng.beta(state.alpha[c][x], state.beta[c][x]);
    if (draw > best_draw) {
      best = x;
      best_draw = draw;
    }
  }
  return best;
}

void tabular_update(TabularBanditState& state, std::span<const double> w, Arm x, double y) {
  if (x >= TabularBanditState::kArms) throw std::out_of_range("tabular_update: arm out of range");
  if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("tabular_update: reward must lie in [0, 1]");
  const std::size_t c = TabularBanditState::cell(w);
  std::size_t& n = state.counts[c][x];
  ++n;
  state.means[c][x] += (y - state.means[c][x]) / static_cast<double>(n);
  state.alpha[c][x] += y;
  state.beta[c][x] += 1.0 - y;
  ++state.t;
}

void warm_start_tabular(TabularBanditState& state, const PriorDataset& data) {
  for (const PriorSample& s : data) tabular_update(state, s.w, s.x, s.y);
}

}  // namespace tbandit::baselines
