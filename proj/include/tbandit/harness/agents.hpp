#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbandit/baselines/linucb.hpp"
#include "tbandit/baselines/tabular.hpp"
#include "tbandit/causal/binary_agent.hpp"
#include "tbandit/core/dataset.hpp"
#include "tbandit/core/rng.hpp"
#include "tbandit/env/domain.hpp"
#include "tbandit/vae/agent.hpp"
#include "tbandit/vae/pretrain.hpp"

namespace tbandit::harness {

enum class AgentKind {
  Cts,
  CtsMinus,
  Cucb,
  CucbMinus,
  CausalBinary,
  LinUcb,
  LinUcbMinus,
  CausalVae,
  VaePrior,
  Vae,
  Random,
};

/// Stable identifiers used in configs and CSV output.
std::string agent_id(AgentKind kind);
/// Throws ConfigError for an unknown id.
AgentKind parse_agent_kind(std::string_view id);
std::vector<AgentKind> all_agent_kinds();

bool is_vae_agent(AgentKind kind);
/// Whether the agent can run on the given environment variant.
bool supports_variant(AgentKind kind, env::Variant variant);

struct AgentConfig {
  AgentKind kind = AgentKind::Random;
  double alpha_explore = 1.0;     // LinUCB
  double smoothing = 1.0;         // causal_binary CPT pseudo-count
  bool sample_posterior = false;  // VAE agents

  std::string id() const { return agent_id(kind); }
};

struct VaeSettings {
  std::size_t dim_z = 1;
  std::vector<std::size_t> hidden{30, 30, 30};
  nn::Activation activation = nn::Activation::ELU;
  double beta = 0.1;
  vae::PretrainOptions pretrain{};
  std::size_t buffer_capacity = 1000;
  std::size_t batch_size = 32;
};

/// The bandit-facing interface: sees only the proxy, returns an arm, then
/// receives the realized reward.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual Arm select(std::span<const double> w) = 0;
  virtual void observe(std::span<const double> w, Arm x, double y) = 0;
};

class RandomAgent final : public Agent {
 public:
  RandomAgent(std::size_t arms, Rng rng) : arms_(arms), rng_(rng) {}
  std::string name() const override { return agent_id(AgentKind::Random); }
  Arm select(std::span<const double>) override { return rng_.uniform_index(arms_); }
  void observe(std::span<const double>, Arm, double) override {}

 private:
  std::size_t arms_;
  Rng rng_;
};

/// Context-UCB or Context-TS, optionally warm-started on the prior data.
class TabularAgent final : public Agent {
 public:
  enum class Rule { Ucb, ThompsonSampling };
  TabularAgent(std::string name, Rule rule, baselines::TabularBanditState state, Rng rng)
      : name_(std::move(name)), rule_(rule), state_(state), rng_(rng) {}

  std::string name() const override { return name_; }
  Arm select(std::span<const double> w) override;
  void observe(std::span<const double> w, Arm x, double y) override;
  const baselines::TabularBanditState& state() const { return state_; }

 private:
  std::string name_;
  Rule rule_;
  baselines::TabularBanditState state_;
  Rng rng_;
};

class LinUcbAgent final : public Agent {
 public:
  LinUcbAgent(std::string name, baselines::LinUcbState state) : name_(std::move(name)), state_(std::move(state)) {}
  std::string name() const override { return name_; }
  Arm select(std::span<const double> w) override { return baselines::linucb_select(state_, w); }
  void observe(std::span<const double> w, Arm x, double y) override { baselines::linucb_update(state_, w, x, y); }

 private:
  std::string name_;
  baselines::LinUcbState state_;
};

/// Transport-formula agent: the proxy marginal is updated inside select, since the
/// action already depends on the current w.
class CausalBinaryAgent final : public Agent {
 public:
  explicit CausalBinaryAgent(causal::BinaryCausalState state) : state_(state) {}
  std::string name() const override { return agent_id(AgentKind::CausalBinary); }
  Arm select(std::span<const double> w) override;
  void observe(std::span<const double>, Arm, double) override {}
  const causal::BinaryCausalState& state() const { return state_; }

 private:
  causal::BinaryCausalState state_;
};

class VaeBanditAgent final : public Agent {
 public:
  VaeBanditAgent(std::string name, vae::VaeAgent agent) : name_(std::move(name)), agent_(std::move(agent)) {}
  std::string name() const override { return name_; }
  Arm select(std::span<const double> w) override { return agent_.select(w); }
  void observe(std::span<const double> w, Arm x, double y) override { agent_.observe(w, x, y); }
  const vae::VaeAgent& inner() const { return agent_; }

 private:
  std::string name_;
  vae::VaeAgent agent_;
};

/// Stream id for one agent's randomness, keyed by the agent's name so the
/// agent list order never matters.
std::uint64_t agent_stream(std::string_view agent_name, std::uint64_t purpose);

/// Builds any non-VAE agent for one seed.
std::unique_ptr<Agent> make_agent(const AgentConfig& config, const PriorDataset& prior, std::size_t dim_w,
                                  std::uint64_t seed);

/// Initialized (and, for causal_vae / vae_prior, pretrained) model for one
/// seed. The random initialization is shared by all VAE agents of a seed,
/// so the three differ only in pretraining.
vae::VaeModel prepare_vae_model(AgentKind kind, const VaeSettings& settings, const PriorDataset& prior,
                                std::size_t dim_w, std::uint64_t seed, vae::PretrainReport* report = nullptr);

/// Online agent around a prepared model. Minibatch streams are shared across
/// VAE agents of a seed as well.
std::unique_ptr<VaeBanditAgent> make_vae_agent(const AgentConfig& config, const VaeSettings& settings,
                                               vae::VaeModel model, std::size_t total_steps,
                                               std::size_t gradient_steps, std::uint64_t seed);

}  // namespace tbandit::harness
