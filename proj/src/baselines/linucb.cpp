#include "tbandit/baselines/linucb.hpp"

#include <cmath>
#include <stdexcept>

#include "tbandit/core/error.hpp"

namespace tbandit::baselines {
namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> w) {
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

}  // namespace

LinUcbState::LinUcbState(std::size_t dim_, std::size_t arms, double alpha)
    : alpha_explore(alpha), dim(dim_) {
  if (dim_ == 0 || arms == 0) throw std::invalid_argument("LinUcbState: dim and arms must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("LinUcbState: alpha must be >= 0");
  const auto d = static_cast<Eigen::Index>(dim_);
  A.assign(arms, Eigen::MatrixXd::Identity(d, d));
  b.assign(arms, Eigen::VectorXd::Zero(d));
}

std::vector<double> linucb_scores(const LinUcbState& state, std::span<const double> w) {
  if (w.size() != state.dim) throw std::invalid_argument("linucb: feature dimension mismatch");
  const auto wv = as_vector(w);
  std::vector<double> scores(state.A.size());
  for (std::size_t x = 0; x < state.A.size(); ++x) {
    const Eigen::LLT<Eigen::MatrixXd> llt(state.A[x]);
    if (llt.info() != Eigen::Success) throw RuntimeAbort("linucb: design matrix is not positive definite");
    const Eigen::VectorXd theta = llt.solve(state.b[x]);
    const Eigen::VectorXd ainv_w = llt.solve(wv);
    scores[x] = theta.dot(wv) + state.alpha_explore * std::sqrt(std::max(0.0, wv.dot(ainv_w)));
  }
  return scores;
}

Arm linucb_select(const LinUcbState& state, std::span<const double> w) {
  const std::vector<double> scores = linucb_scores(state, w);
  Arm best = 0;
  for (Arm x = 1; x < scores.size(); ++x) {
    if (scores[x] > scores[best]) best = x;
  }
  return best;
}

void linucb_update(LinUcbState& state, std::span<const double> w, Arm x, double y) {
  if (w.size() != state.dim) throw std::invalid_argument("linucb: feature dimension mismatch");
  if (x >= state.A.size()) throw std::out_of_range("linucb: arm out of range");
  const auto wv = as_vector(w);
  state.A[x].noalias() += wv * wv.transpose();
  state.b[x].noalias() += y * wv;
}

void warm_start_linucb(LinUcbState& state, const PriorDataset& data) {
  for (const PriorSample& s : data) linucb_update(state, s.w, s.x, s.y);
}

}  // namespace tbandit::baselines
