#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tbandit/core/dataset.hpp"

namespace tbandit::baselines {

/// Disjoint LinUCB: one ridge model (A, b) per arm, A initialized to I.
struct LinUcbState {
  LinUcbState(std::size_t dim, std::size_t arms = 2, double alpha_explore = 1.0);

  std::vector<Eigen::MatrixXd> A;
  std::vector<Eigen::VectorXd> b;
  double alpha_explore;
  std::size_t dim;
};

/// p_x = (A_x^-1 b_x)^T w + alpha * sqrt(w^T A_x^-1 w), via Cholesky solves.
std::vector<double> linucb_scores(const LinUcbState& state, std::span<const double> w);
Arm linucb_select(const LinUcbState& state, std::span<const double> w);
void linucb_update(LinUcbState& state, std::span<const double> w, Arm x, double y);
void warm_start_linucb(LinUcbState& state, const PriorDataset& data);

}  // namespace tbandit::baselines
