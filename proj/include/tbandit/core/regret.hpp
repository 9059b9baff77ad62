#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tbandit {

/// Per-step instantaneous and cumulative regret of one seeded run.
/// cumulative[t] is the left-to-right running sum of instantaneous[0..t].
class RegretTrace {
 public:
  RegretTrace() = default;
  RegretTrace(std::string agent_name, std::uint64_t seed)
      : agent_name_(std::move(agent_name)), seed_(seed) {}

  /// Appends r (must be >= 0; a negative value means the oracle optimum was
  /// computed incorrectly by the caller).
  void accumulate(double r);

  const std::vector<double>& instantaneous() const { return instantaneous_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  std::size_t size() const { return instantaneous_.size(); }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  std::uint64_t seed() const { return seed_; }
  const std::string& agent_name() const { return agent_name_; }

  void reserve(std::size_t n) {
    instantaneous_.reserve(n);
    cumulative_.reserve(n);
  }

 private:
  std::vector<double> instantaneous_;
  std::vector<double> cumulative_;
  std::string agent_name_;
  std::uint64_t seed_ = 0;
};

RegretTrace accumulate_regret(RegretTrace trace, double r);

}  // namespace tbandit
