#include "tbandit/harness/episode.hpp"

#include <algorithm>
#include <string>

#include "tbandit/core/error.hpp"

namespace tbandit::harness {

EpisodeStreams episode_streams(std::uint64_t seed) {
  return {Rng(seed, derive_stream(stable_hash("target"), stream::kContext)),
          Rng(seed, derive_stream(stable_hash("target"), stream::kReward))};
}

RegretTrace run_episode(const env::DomainSpec& target, Agent& agent, std::size_t steps, EpisodeStreams streams,
                        std::uint64_t seed, const ContextObserver& observer) {
  RegretTrace trace(agent.name(), seed);
  trace.reserve(steps);
  for (std::size_t t = 1; t <= steps; ++t) {
    const env::ContextProxyPair s = env::sample_context_proxy(target, streams.context);
    if (observer) observer(s.z);
    Arm x = 0;
    try {
      x = agent.select(s.w);
      if (x >= target.num_arms()) throw std::out_of_range("arm " + std::to_string(x) + " out of range");
      const double y = env::sample_reward(target, s.z, x, streams.reward);
      agent.observe(s.w, x, y);
    } catch (const std::exception& e) {
      throw RuntimeAbort("agent " + agent.name() + ", seed " + std::to_string(seed) + ", step " + std::to_string(t) +
                         ": " + e.what());
    }
    const env::OptimalArm best = env::optimal_arm(target, s.z);
    // Guard against -0 and rounding when the chosen arm is optimal.
    trace.accumulate(std::max(0.0, best.value - env::expected_reward(target, s.z, x)));
  }
  return trace;
}

}  // namespace tbandit::harness
