#pragma once

#include <cstddef>
#include <vector>

#include "tbandit/core/rng.hpp"
#include "tbandit/vae/model.hpp"

namespace tbandit::vae {

/// Fixed-capacity FIFO ring of (w, x, y) records.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1000);

  void push(Record record);
  /// m indices drawn uniformly with replacement. Throws on an empty buffer.
  std::vector<Record> sample(std::size_t m, Rng& rng) const;

  std::size_t size() const { return records_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return records_.empty(); }
  /// Contents from oldest to newest.
  std::vector<Record> contents() const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;  // next slot to overwrite once full
  std::vector<Record> records_;
};

/// Gradient steps fire at every t (1-based) with t mod interval == 0, where
/// interval = round(T / G).
struct TrainSchedule {
  TrainSchedule(std::size_t total_steps, std::size_t gradient_steps, std::size_t batch_size = 32);

  std::size_t total_steps;
  std::size_t gradient_steps;
  std::size_t batch_size;
  std::size_t interval;

  bool is_gradient_step(std::size_t t) const { return t % interval == 0; }
  /// Steps that actually fire over 1..T.
  std::size_t realized_steps() const { return total_steps / interval; }
};

/// Gradient-step counts of the default sweep (intervals 1000, 200, ..., 5 at T = 1000).
inline const std::vector<std::size_t> kDefaultGradientSteps{1, 5, 10, 20, 40, 66, 100, 125, 166, 200};

}  // namespace tbandit::vae
