#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tbandit/core/rng.hpp"
#include "tbandit/nn/adam.hpp"
#include "tbandit/vae/model.hpp"
#include "tbandit/vae/replay_buffer.hpp"

namespace tbandit::vae {

struct OnlineOptions {
  double lr = 0.005;
  std::size_t buffer_capacity = 1000;
  bool sample_posterior = false;  // act on a posterior draw instead of the mean
};

/// Online loop shared by the Causal, VAE-prior and VAE agents; they differ
/// only in how the model passed in was initialized. Every parameter network
/// is fine-tuned by the online updates.
class VaeAgent {
 public:
  VaeAgent(VaeModel model, TrainSchedule schedule, OnlineOptions options, Rng minibatch_rng, Rng action_rng);
  // The optimizer holds handles into model_, so a copy would train the original.
  VaeAgent(const VaeAgent&) = delete;
  VaeAgent& operator=(const VaeAgent&) = delete;
  VaeAgent(VaeAgent&&) = default;

  Arm select(std::span<const double> w);
  /// Stores the record, advances t and takes a gradient step when the
  /// schedule fires.
  void observe(std::span<const double> w, Arm x, double y);

  const VaeModel& model() const { return model_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const TrainSchedule& schedule() const { return schedule_; }
  std::size_t t() const { return t_; }
  std::size_t gradient_steps_taken() const { return steps_taken_; }
  /// Loss of the most recent gradient step (NaN before the first).
  double last_loss() const { return last_loss_; }

 private:
  VaeModel model_;
  TrainSchedule schedule_;
  OnlineOptions options_;
  ReplayBuffer buffer_;
  nn::Adam adam_;
  Rng minibatch_rng_;
  Rng action_rng_;
  std::size_t t_ = 0;
  std::size_t steps_taken_ = 0;
  double last_loss_;
};

}  // namespace tbandit::vae
