#include "tbandit/harness/presets.hpp"

#include <functional>
#include <map>

#include "tbandit/core/error.hpp"
#include "tbandit/vae/replay_buffer.hpp"

namespace tbandit::harness {
namespace {

using env::ContextParams;
using env::Truncation;

constexpr std::uint64_t kSurrogateGeneratorSeed = 20240917;
// Gain of the frozen generator. Small enough that a single proxy leaves real
// uncertainty about z, so the learned posterior leans on the source prior.
constexpr double kSurrogateGain = 0.08;

ExperimentConfig binary_preset(const std::string& name, double c_s, double c_t) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.domains = env::make_domain_pair(env::DomainSpec::binary(c_s), ContextParams::bernoulli(c_s),
                                      ContextParams::bernoulli(c_t));
  for (AgentKind k : {AgentKind::Cts, AgentKind::CtsMinus, AgentKind::Cucb, AgentKind::CucbMinus,
                      AgentKind::CausalBinary}) {
    cfg.agents.push_back({.kind = k});
  }
  cfg.seeds = seed_range(100);
  cfg.posterior_samples = 0;
  return cfg;
}

ExperimentConfig lingauss_preset() {
  ExperimentConfig cfg;
  cfg.name = "lingauss_negative_transfer";
  env::ProxyParams proxy;
  proxy.dim_w = 5;
  proxy.a.assign(5, 1.0);
  proxy.b.assign(5, 0.0);
  const auto mech = env::DomainSpec::linear_gaussian(ContextParams::gaussian({8.0}), proxy);
  cfg.domains = env::make_domain_pair(mech, ContextParams::gaussian({8.0}), ContextParams::gaussian({2.0}));
  cfg.agents = {{.kind = AgentKind::LinUcb}, {.kind = AgentKind::LinUcbMinus}};
  cfg.seeds = seed_range(20);
  cfg.posterior_samples = 0;
  return cfg;
}

ExperimentConfig proxy_preset(const std::string& name, std::size_t dim_z, std::size_t dim_w, ContextParams source,
                              ContextParams target) {
  ExperimentConfig cfg;
  cfg.name = name;
  const auto mech = env::DomainSpec::nonlinear_proxy(source, surrogate_proxy(dim_w));
  cfg.domains = env::make_domain_pair(mech, std::move(source), std::move(target));
  cfg.agents = {{.kind = AgentKind::CausalVae}, {.kind = AgentKind::VaePrior}, {.kind = AgentKind::Vae}};
  cfg.seeds = seed_range(5);
  cfg.grad_steps = vae::kDefaultGradientSteps;
  cfg.vae.dim_z = dim_z;
  if (dim_z == 1) {
    cfg.vae.hidden = {30, 30, 30};
    cfg.vae.pretrain.lr = 0.005;
  } else {
    cfg.vae.hidden = {128, 128, 128};
    cfg.vae.pretrain.lr = 0.001;
  }
  return cfg;
}

std::vector<double> shifted_mean(std::size_t dim_z, double first) {
  std::vector<double> mean(dim_z, 0.0);
  mean[0] = first;
  return mean;
}

struct PresetEntry {
  std::string description;
  std::function<ExperimentConfig()> build;
};

const std::map<std::string, PresetEntry>& registry() {
  static const std::map<std::string, PresetEntry> presets = [] {
    std::map<std::string, PresetEntry> m;
    m["binary_1"] = {"binary model, c_s=0.9 -> c_t=0.5", [] { return binary_preset("binary_1", 0.9, 0.5); }};
    m["binary_2"] = {"binary model, c_s=0.5 -> c_t=0.9", [] { return binary_preset("binary_2", 0.5, 0.9); }};
    m["binary_3"] = {"binary model, c_s=0.9 -> c_t=0.1", [] { return binary_preset("binary_3", 0.9, 0.1); }};
    m["binary_4"] = {"binary model, c_s=0.1 -> c_t=0.9", [] { return binary_preset("binary_4", 0.1, 0.9); }};
    m["lingauss_negative_transfer"] = {"linear-Gaussian proxy, u_s=8 -> u_t=2, LinUCB vs warm-started LinUCB",
                                       lingauss_preset};
    m["proxy_shift_pos2neg"] = {"nonlinear proxy d_w=25, z ~ N(1,1) -> N(-1,1)", [] {
                                  return proxy_preset("proxy_shift_pos2neg", 1, 25, ContextParams::gaussian({1.0}),
                                                      ContextParams::gaussian({-1.0}));
                                }};
    m["proxy_shift_neg2pos"] = {"nonlinear proxy d_w=25, z ~ N(-1,1) -> N(1,1)", [] {
                                  return proxy_preset("proxy_shift_neg2pos", 1, 25, ContextParams::gaussian({-1.0}),
                                                      ContextParams::gaussian({1.0}));
                                }};
    m["proxy_extreme_pos2neg"] = {"nonlinear proxy d_w=25, z truncated to z>=0 -> z<0", [] {
                                    return proxy_preset("proxy_extreme_pos2neg", 1, 25,
                                                        ContextParams::gaussian({0.0}, Truncation::PositiveOnly),
                                                        ContextParams::gaussian({0.0}, Truncation::NegativeOnly));
                                  }};
    m["proxy_extreme_neg2pos"] = {"nonlinear proxy d_w=25, z truncated to z<0 -> z>=0", [] {
                                    return proxy_preset("proxy_extreme_neg2pos", 1, 25,
                                                        ContextParams::gaussian({0.0}, Truncation::NegativeOnly),
                                                        ContextParams::gaussian({0.0}, Truncation::PositiveOnly));
                                  }};
    m["proxy_hd_pos2neg"] = {"wide nonlinear proxy d_w=64, d_z=3, z_0 ~ N(1,1) -> N(-1,1)", [] {
                               return proxy_preset("proxy_hd_pos2neg", 3, 64, ContextParams::gaussian(shifted_mean(3, 1.0)),
                                                   ContextParams::gaussian(shifted_mean(3, -1.0)));
                             }};
    m["proxy_hd_neg2pos"] = {"wide nonlinear proxy d_w=64, d_z=3, z_0 ~ N(-1,1) -> N(1,1)", [] {
                               return proxy_preset("proxy_hd_neg2pos", 3, 64,
                                                   ContextParams::gaussian(shifted_mean(3, -1.0)),
                                                   ContextParams::gaussian(shifted_mean(3, 1.0)));
                             }};
    return m;
  }();
  return presets;
}

}  // namespace

env::ProxyParams surrogate_proxy(std::size_t dim_w) {
  env::ProxyParams p;
  p.dim_w = dim_w;
  p.generator_seed = kSurrogateGeneratorSeed;
  p.hidden_widths = {32, 32};
  p.output_gain = kSurrogateGain;
  p.noise_std = 0.1;
  return p;
}

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& [name, entry] : registry()) out.push_back({name, entry.description});
  return out;
}

ExperimentConfig make_preset(std::string_view name) {
  const auto& presets = registry();
  const auto it = presets.find(std::string(name));
  if (it == presets.end()) {
    std::string known;
    for (const auto& [n, e] : presets) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  return it->second.build();
}

}  // namespace tbandit::harness
