#pragma once

#include <iosfwd>

#include "tbandit/core/dataset.hpp"

namespace tbandit::env {

/// Header `z_0..z_{dz-1},w_0..w_{dw-1},x,y`; reals printed with 17
/// significant digits so a read-back is exact.
void write_prior_csv(std::ostream& os, const PriorDataset& data);
PriorDataset read_prior_csv(std::istream& is);

}  // namespace tbandit::env
