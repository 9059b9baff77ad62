#include "tbandit/harness/agents.hpp"

#include <array>

#include "tbandit/core/error.hpp"

namespace tbandit::harness {
namespace {

struct KindName {
  AgentKind kind;
  const char* id;
};

constexpr std::array<KindName, 11> kKinds{{
    {AgentKind::Cts, "cts"},
    {AgentKind::CtsMinus, "cts_minus"},
    {AgentKind::Cucb, "cucb"},
    {AgentKind::CucbMinus, "cucb_minus"},
    {AgentKind::CausalBinary, "causal_binary"},
    {AgentKind::LinUcb, "linucb"},
    {AgentKind::LinUcbMinus, "linucb_minus"},
    {AgentKind::CausalVae, "causal_vae"},
    {AgentKind::VaePrior, "vae_prior"},
    {AgentKind::Vae, "vae"},
    {AgentKind::Random, "random"},
}};

// Shared key for the VAE agents' initialization and online minibatches.
constexpr std::string_view kVaeSharedKey = "vae-shared";

int binary_w(std::span<const double> w) { return static_cast<int>(baselines::TabularBanditState::cell(w)); }

}  // namespace

std::string agent_id(AgentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.id;
  }
  return "unknown";
}

AgentKind parse_agent_kind(std::string_view id) {
  for (const auto& k : kKinds) {
    if (id == k.id) return k.kind;
  }
  std::string known;
  for (const auto& k : kKinds) known += std::string(known.empty() ? "" : ", ") + k.id;
  throw ConfigError("unknown agent '" + std::string(id) + "' (known: " + known + ")");
}

std::vector<AgentKind> all_agent_kinds() {
  std::vector<AgentKind> out;
  for (const auto& k : kKinds) out.push_back(k.kind);
  return out;
}

bool is_vae_agent(AgentKind kind) {
  return kind == AgentKind::CausalVae || kind == AgentKind::VaePrior || kind == AgentKind::Vae;
}

bool supports_variant(AgentKind kind, env::Variant variant) {
  switch (kind) {
    case AgentKind::Cts:
    case AgentKind::CtsMinus:
    case AgentKind::Cucb:
    case AgentKind::CucbMinus:
    case AgentKind::CausalBinary:
      return variant == env::Variant::Binary;
    case AgentKind::CausalVae:
    case AgentKind::VaePrior:
    case AgentKind::Vae:
      return variant != env::Variant::Binary;
    case AgentKind::LinUcb:
    case AgentKind::LinUcbMinus:
    case AgentKind::Random:
      return true;
  }
  return false;
}

Arm TabularAgent::select(std::span<const double> w) {
  if (rule_ == Rule::Ucb) return baselines::ucb_select(state_, w, state_.t + 1);
  return baselines::ts_select(state_, w, rng_);
}

void TabularAgent::observe(std::span<const double> w, Arm x, double y) { baselines::tabular_update(state_, w, x, y); }

Arm CausalBinaryAgent::select(std::span<const double> w) { return causal::act(state_, binary_w(w)); }

std::uint64_t agent_stream(std::string_view agent_name, std::uint64_t purpose) {
  return derive_stream(stable_hash(agent_name), purpose);
}

std::unique_ptr<Agent> make_agent(const AgentConfig& config, const PriorDataset& prior, std::size_t dim_w,
                                  std::uint64_t seed) {
  const std::string name = config.id();
  Rng rng(seed, agent_stream(name, stream::kExploration));
  switch (config.kind) {
    case AgentKind::Random:
      return std::make_unique<RandomAgent>(2, rng);
    case AgentKind::Cts:
    case AgentKind::CtsMinus:
    case AgentKind::Cucb:
    case AgentKind::CucbMinus: {
      baselines::TabularBanditState state;
      if (config.kind == AgentKind::CtsMinus || config.kind == AgentKind::CucbMinus) {
        baselines::warm_start_tabular(state, prior);
        // The warm start advanced the step counter; the UCB log term keeps
        // counting from there, which is the naive-transfer behavior.
      }
      const auto rule = (config.kind == AgentKind::Cts || config.kind == AgentKind::CtsMinus)
                            ? TabularAgent::Rule::ThompsonSampling
                            : TabularAgent::Rule::Ucb;
      return std::make_unique<TabularAgent>(name, rule, state, rng);
    }
    case AgentKind::CausalBinary:
      return std::make_unique<CausalBinaryAgent>(causal::fit_prior(prior, config.smoothing));
    case AgentKind::LinUcb:
    case AgentKind::LinUcbMinus: {
      baselines::LinUcbState state(dim_w, 2, config.alpha_explore);
      if (config.kind == AgentKind::LinUcbMinus) baselines::warm_start_linucb(state, prior);
      return std::make_unique<LinUcbAgent>(name, std::move(state));
    }
    case AgentKind::CausalVae:
    case AgentKind::VaePrior:
    case AgentKind::Vae:
      break;
  }
  throw std::logic_error("make_agent: VAE agents are built with make_vae_agent");
}

vae::VaeModel prepare_vae_model(AgentKind kind, const VaeSettings& settings, const PriorDataset& prior,
                                std::size_t dim_w, std::uint64_t seed, vae::PretrainReport* report) {
  vae::VaeArchitecture arch;
  arch.dim_w = dim_w;
  arch.dim_z = settings.dim_z;
  arch.hidden = settings.hidden;
  arch.activation = settings.activation;
  arch.beta = settings.beta;
  Rng init_rng(seed, agent_stream(kVaeSharedKey, stream::kInit));
  vae::VaeModel model(arch, init_rng);

  vae::PretrainOptions options = settings.pretrain;
  options.batch_size = settings.batch_size;
  Rng pretrain_rng(seed, agent_stream(agent_id(kind), stream::kPretrain));
  vae::PretrainReport r;
  if (kind == AgentKind::CausalVae) {
    r = vae::pretrain_decoders(model, prior, options, pretrain_rng);
  } else if (kind == AgentKind::VaePrior) {
    r = vae::pretrain_full_vae(model, prior, options, pretrain_rng);
  }
  if (report) *report = r;
  return model;
}

std::unique_ptr<VaeBanditAgent> make_vae_agent(const AgentConfig& config, const VaeSettings& settings,
                                               vae::VaeModel model, std::size_t total_steps,
                                               std::size_t gradient_steps, std::uint64_t seed) {
  vae::OnlineOptions online;
  online.lr = settings.pretrain.lr;
  online.buffer_capacity = settings.buffer_capacity;
  online.sample_posterior = config.sample_posterior;
  vae::TrainSchedule schedule(total_steps, gradient_steps, settings.batch_size);
  Rng minibatch(seed, agent_stream(kVaeSharedKey, stream::kMinibatch));
  Rng action(seed, agent_stream(kVaeSharedKey, stream::kExploration));
  return std::make_unique<VaeBanditAgent>(
      config.id(), vae::VaeAgent(std::move(model), schedule, online, minibatch, action));
}

}  // namespace tbandit::harness
