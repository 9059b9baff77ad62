#include "tbandit/nn/adam.hpp"

#include <cmath>
#include <sstream>

#include "tbandit/core/error.hpp"

namespace tbandit::nn {

void adam_step(AdamState& state, std::span<Tensor> params) {
  if (state.first_moment.empty()) {
    for (const Tensor& p : params) {
      state.first_moment.emplace_back(p.size(), 0.0);
      state.second_moment.emplace_back(p.size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) throw std::invalid_argument("adam_step: parameter list changed");

  for (std::size_t k = 0; k < params.size(); ++k) {
    if (state.first_moment[k].size() != params[k].size()) throw std::invalid_argument("adam_step: shape changed");
    if (!params[k].has_grad()) continue;
    const auto g = params[k].grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) {
        std::ostringstream os;
        os << "adam_step: non-finite gradient " << g[i] << " at parameter " << k << ", element " << i;
        throw RuntimeAbort(os.str());
      }
    }
  }

  ++state.step;
  const AdamOptions& o = state.options;
  const double correction1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto value = params[k].mutable_values();
    const bool has_grad = params[k].has_grad();
    const auto g = params[k].grad();
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double gi = has_grad ? g[i] : 0.0;
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * gi;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * gi * gi;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

Adam::Adam(std::vector<Tensor> params, AdamOptions options) : params_(std::move(params)) {
  state_.options = options;
}

void Adam::zero_grad() {
  for (Tensor& p : params_) p.zero_grad();
}

void Adam::step() { adam_step(state_, params_); }

}  // namespace tbandit::nn
