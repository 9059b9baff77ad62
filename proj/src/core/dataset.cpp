#include "tbandit/core/dataset.hpp"

#include <stdexcept>

namespace tbandit {

void PriorDataset::push_back(PriorSample sample) {
  if (sample.w.empty()) throw std::invalid_argument("PriorDataset: proxy must have dimension >= 1");
  if (!samples_.empty() &&
      (sample.w.size() != dim_w() || sample.z.size() != dim_z())) {
    throw std::invalid_argument("PriorDataset: inconsistent record dimensions");
  }
  samples_.push_back(std::move(sample));
}

}  // namespace tbandit
