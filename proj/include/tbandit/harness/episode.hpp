#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "tbandit/core/regret.hpp"
#include "tbandit/core/rng.hpp"
#include "tbandit/env/domain.hpp"
#include "tbandit/harness/agents.hpp"

namespace tbandit::harness {

/// Target-domain randomness of one seed. Every agent of a seed sees the same
/// contexts, proxies and reward noise.
struct EpisodeStreams {
  Rng context;
  Rng reward;
};

EpisodeStreams episode_streams(std::uint64_t seed);

/// Test hook that sees each latent context before the agent acts.
using ContextObserver = std::function<void(std::span<const double> z)>;

/// Runs T steps on the target domain. Regret uses the oracle conditional
/// means for both the optimum and the chosen arm. An exception thrown by the
/// agent is rethrown as RuntimeAbort naming the agent, seed and step.
RegretTrace run_episode(const env::DomainSpec& target, Agent& agent, std::size_t steps, EpisodeStreams streams,
                        std::uint64_t seed, const ContextObserver& observer = {});

}  // namespace tbandit::harness
