#include "tbandit/vae/agent.hpp"

#include <limits>

namespace tbandit::vae {

VaeAgent::VaeAgent(VaeModel model, TrainSchedule schedule, OnlineOptions options, Rng minibatch_rng, Rng action_rng)
    : model_(std::move(model)),
      schedule_(schedule),
      options_(options),
      buffer_(options.buffer_capacity),
      adam_(model_.parameters(), {.lr = options.lr}),
      minibatch_rng_(minibatch_rng),
      action_rng_(action_rng),
      last_loss_(std::numeric_limits<double>::quiet_NaN()) {}

Arm VaeAgent::select(std::span<const double> w) {
  return act(model_, w, options_.sample_posterior ? &action_rng_ : nullptr);
}

void VaeAgent::observe(std::span<const double> w, Arm x, double y) {
  buffer_.push({std::vector<double>(w.begin(), w.end()), x, y});
  ++t_;
  if (!schedule_.is_gradient_step(t_) || buffer_.empty()) return;

  const std::vector<Record> records = buffer_.sample(schedule_.batch_size, minibatch_rng_);
  adam_.zero_grad();
  const nn::Tensor loss = elbo_transfer_loss(model_, make_batch(records), minibatch_rng_);
  last_loss_ = loss.item();
  loss.backward();
  adam_.step();
  ++steps_taken_;
}

}  // namespace tbandit::vae
