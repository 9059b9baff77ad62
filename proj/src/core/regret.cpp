#include "tbandit/core/regret.hpp"

#include <cmath>
#include <stdexcept>

namespace tbandit {

void RegretTrace::accumulate(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("RegretTrace: instantaneous regret must be finite and >= 0");
  }
  const double tail = cumulative_.empty() ? 0.0 : cumulative_.back();
  instantaneous_.push_back(r);
  cumulative_.push_back(tail + r);
}

RegretTrace accumulate_regret(RegretTrace trace, double r) {
  trace.accumulate(r);
  return trace;
}

}  // namespace tbandit
