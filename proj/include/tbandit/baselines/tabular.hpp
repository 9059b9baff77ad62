#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "tbandit/core/dataset.hpp"
#include "tbandit/core/rng.hpp"

namespace tbandit::baselines {

/// Per-(proxy cell, arm) statistics shared by Context-UCB and Context-TS on
/// the binary model. The proxy is discretized by identity on w in {0, 1}.
struct TabularBanditState {
  static constexpr std::size_t kCells = 2;
  static constexpr std::size_t kArms = 2;
  using Table = std::array<std::array<double, kArms>, kCells>;
  using CountTable = std::array<std::array<std::size_t, kArms>, kCells>;

  CountTable counts{};
  Table means{};
  Table alpha = ones();
  Table beta = ones();
  std::size_t t = 0;

  static std::size_t cell(std::span<const double> w);

 private:
  static Table ones() {
    Table table;
    for (auto& row : table) row.fill(1.0);
    return table;
  }
};

/// Untried arms first (lowest index), otherwise argmax of
/// mean + sqrt(2 ln t / count); ties go to the lower arm.
Arm ucb_select(const TabularBanditState& state, std::span<const double> w, std::size_t t);

/// Index value used by ucb_select for a tried arm.
double ucb_index(double mean, std::size_t count, std::size_t t);

/// Draws theta_x ~ Beta(alpha, beta) per arm and returns the argmax.
Arm ts_select(const TabularBanditState& state, std::span<const double> w, Rng& rng);

/// Count, running mean and Beta-posterior update. Rewards must lie in [0, 1].
void tabular_update(TabularBanditState& state, std::span<const double> w, Arm x, double y);

/// Folds every prior record through tabular_update keyed on its observed w.
/// This inherits the source-domain conditional means (naive transfer).
void warm_start_tabular(TabularBanditState& state, const PriorDataset& data);

}  // namespace tbandit::baselines
