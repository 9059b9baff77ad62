#pragma once

#include <iosfwd>

#include "tbandit/nn/mlp.hpp"

namespace tbandit::nn {

// Flat little-endian layout:
//   u32 n_widths, u32 widths[n_widths], u32 activation, u32 head,
//   then every parameter tensor in layer order (W_0, b_0, W_1, ...) as f64.
void save_checkpoint(std::ostream& os, const Mlp& mlp);
Mlp load_checkpoint(std::istream& is);

}  // namespace tbandit::nn
