#include "tbandit/vae/replay_buffer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tbandit::vae {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  records_.reserve(capacity);
}

void ReplayBuffer::push(Record record) {
  if (records_.size() < capacity_) {
    records_.push_back(std::move(record));
    return;
  }
  records_[cursor_] = std::move(record);
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<Record> ReplayBuffer::sample(std::size_t m, Rng& rng) const {
  if (records_.empty()) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  std::vector<Record> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(records_[rng.uniform_index(records_.size())]);
  return out;
}

std::vector<Record> ReplayBuffer::contents() const {
  std::vector<Record> out;
  out.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) out.push_back(records_[(cursor_ + i) % records_.size()]);
  return out;
}

TrainSchedule::TrainSchedule(std::size_t total, std::size_t grad, std::size_t batch)
    : total_steps(total), gradient_steps(grad), batch_size(batch), interval(0) {
  if (grad < 1 || grad > total) {
    throw std::invalid_argument("TrainSchedule: need 1 <= G <= T (G=" + std::to_string(grad) +
                                ", T=" + std::to_string(total) + ")");
  }
  if (batch < 1) throw std::invalid_argument("TrainSchedule: batch size must be positive");
  interval = static_cast<std::size_t>(std::llround(static_cast<double>(total) / static_cast<double>(grad)));
}

}  // namespace tbandit::vae
