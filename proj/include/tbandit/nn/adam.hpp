#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tbandit/nn/tensor.hpp"

namespace tbandit::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamOptions options;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::size_t step = 0;
};

/// One bias-corrected Adam update of params from their accumulated
/// gradients (a parameter without a gradient buffer counts as zero).
/// Throws RuntimeAbort on a non-finite gradient before touching anything.
void adam_step(AdamState& state, std::span<Tensor> params);

class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions options);

  void zero_grad();
  void step();
  void set_lr(double lr) { state_.options.lr = lr; }
  double lr() const { return state_.options.lr; }
  const AdamState& state() const { return state_; }
  AdamState& state() { return state_; }
  const std::vector<Tensor>& params() const { return params_; }

 private:
  std::vector<Tensor> params_;
  AdamState state_;
};

}  // namespace tbandit::nn
