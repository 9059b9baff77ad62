#include "tbandit/harness/experiment.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <omp.h>

#include "tbandit/core/error.hpp"
#include "tbandit/env/prior_csv.hpp"
#include "tbandit/harness/csv.hpp"
#include "tbandit/harness/episode.hpp"

namespace tbandit::harness {
namespace {

std::vector<std::vector<double>> encode_held_out(const vae::VaeModel& model, const env::DomainSpec& target,
                                                 std::size_t n, std::uint64_t seed) {
  Rng rng(seed, derive_stream(stable_hash("posterior"), stream::kHeldOut));
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const env::ContextProxyPair s = env::sample_context_proxy(target, rng);
    out.push_back(vae::posterior_mean(model, s.w));
  }
  return out;
}

// Every record produced by one (agent, seed) pair, in G order.
std::vector<RunRecord> run_job(const ExperimentConfig& config, const AgentConfig& agent, std::uint64_t seed) {
  const PriorDataset prior = make_prior_dataset(config, seed);
  const env::DomainSpec& target = config.domains.target;
  std::vector<RunRecord> out;

  if (!is_vae_agent(agent.kind)) {
    std::unique_ptr<Agent> a = make_agent(agent, prior, target.dim_w(), seed);
    RunRecord r;
    r.agent = agent.id();
    r.seed = seed;
    r.trace = run_episode(target, *a, config.steps, episode_streams(seed), seed);
    if (const auto* c = dynamic_cast<const CausalBinaryAgent*>(a.get())) r.pz1_hat = c->state().pz1_hat;
    out.push_back(std::move(r));
    return out;
  }

  const vae::VaeModel initial = prepare_vae_model(agent.kind, config.vae, prior, target.dim_w(), seed);
  for (std::size_t g : config.grad_steps) {
    auto a = make_vae_agent(agent, config.vae, initial, config.steps, g, seed);
    RunRecord r;
    r.agent = agent.id();
    r.seed = seed;
    r.grad_steps = g;
    r.trace = run_episode(target, *a, config.steps, episode_streams(seed), seed);
    if (config.posterior_samples > 0) {
      r.posterior_means = encode_held_out(a->inner().model(), target, config.posterior_samples, seed);
    }
    out.push_back(std::move(r));
  }
  return out;
}

ExperimentResult assemble(const ExperimentConfig& config, std::vector<std::vector<RunRecord>> per_job) {
  ExperimentResult result;
  const std::size_t n_seeds = config.seeds.size();
  for (std::size_t a = 0; a < config.agents.size(); ++a) {
    const std::size_t n_g = is_vae_agent(config.agents[a].kind) ? config.grad_steps.size() : 1;
    for (std::size_t g = 0; g < n_g; ++g) {
      for (std::size_t s = 0; s < n_seeds; ++s) result.runs.push_back(std::move(per_job[a * n_seeds + s][g]));
    }
  }
  result.summary = summarize(result.runs);
  return result;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (steps == 0) throw ConfigError("experiment.steps must be at least 1");
  if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
  if (agents.empty()) throw ConfigError("experiment needs at least one agent");
  if (n_prior == 0) throw ConfigError("experiment.n_prior must be at least 1");
  if (!domains.source.same_mechanisms(domains.target)) {
    throw ConfigError("source and target must share proxy and reward mechanisms");
  }
  std::set<std::uint64_t> unique_seeds(seeds.begin(), seeds.end());
  if (unique_seeds.size() != seeds.size()) throw ConfigError("experiment seeds must be distinct");

  std::set<AgentKind> seen;
  bool any_vae = false;
  for (const AgentConfig& a : agents) {
    if (!seen.insert(a.kind).second) throw ConfigError("agent '" + a.id() + "' listed twice");
    if (!supports_variant(a.kind, domains.target.variant())) {
      throw ConfigError("agent '" + a.id() + "' does not support the " + env::to_string(domains.target.variant()) +
                        " environment");
    }
    if (a.kind == AgentKind::LinUcb || a.kind == AgentKind::LinUcbMinus) {
      if (!(a.alpha_explore >= 0.0) || !std::isfinite(a.alpha_explore)) {
        throw ConfigError("linucb alpha must be finite and >= 0");
      }
    }
    if (a.kind == AgentKind::CausalBinary && !(a.smoothing >= 0.0)) {
      throw ConfigError("causal_binary smoothing must be >= 0");
    }
    any_vae = any_vae || is_vae_agent(a.kind);
  }
  if (any_vae) {
    if (grad_steps.empty()) throw ConfigError("VAE agents need a non-empty grad_steps list");
    for (std::size_t g : grad_steps) {
      if (g < 1 || g > steps) {
        throw ConfigError("grad_steps value " + std::to_string(g) + " outside [1, " + std::to_string(steps) + "]");
      }
    }
    if (seen.count(AgentKind::CausalVae) && vae.dim_z != domains.source.dim_z()) {
      throw ConfigError("causal_vae needs latent_dim equal to the context dimension (" +
                        std::to_string(domains.source.dim_z()) + ")");
    }
    if (vae.dim_z == 0 || vae.hidden.empty() || !(vae.beta > 0.0) || !(vae.pretrain.lr > 0.0) ||
        vae.batch_size == 0 || vae.buffer_capacity == 0) {
      throw ConfigError("invalid VAE settings (latent_dim, hidden, beta, lr, batch_size, buffer_capacity)");
    }
    for (std::size_t h : vae.hidden) {
      if (h == 0) throw ConfigError("VAE hidden widths must be positive");
    }
  }
}

std::vector<std::uint64_t> seed_range(std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = i;
  return seeds;
}

PriorDataset make_prior_dataset(const ExperimentConfig& config, std::uint64_t seed) {
  Rng rng(seed, derive_stream(stable_hash("prior"), stream::kPrior));
  return env::generate_prior_dataset(config.domains.source, config.policy, config.n_prior, rng);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_seeds = config.seeds.size();
  const std::size_t n_jobs = config.agents.size() * n_seeds;
  std::vector<std::vector<RunRecord>> per_job(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  const int threads = config.threads > 0 ? static_cast<int>(config.threads) : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t j = 0; j < n_jobs; ++j) {
    try {
      per_job[j] = run_job(config, config.agents[j / n_seeds], config.seeds[j % n_seeds]);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return assemble(config, std::move(per_job));
}

ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_seeds = config.seeds.size();
  std::vector<std::vector<RunRecord>> per_job(config.agents.size() * n_seeds);
  for (std::size_t j = 0; j < per_job.size(); ++j) {
    per_job[j] = run_job(config, config.agents[j / n_seeds], config.seeds[j % n_seeds]);
  }
  return assemble(config, std::move(per_job));
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs) {
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> totals;
  for (const RunRecord& r : runs) {
    const auto key = std::make_pair(r.agent, r.grad_steps);
    if (!totals.count(key)) rows.push_back({r.agent, r.grad_steps, 0, 0.0, 0.0});
    totals[key].push_back(r.total());
  }
  for (SummaryRow& row : rows) {
    const std::vector<double>& v = totals[{row.agent, row.grad_steps}];
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    row.n_seeds = v.size();
    row.mean_total_regret = mean;
    row.stderr_total_regret = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return rows;
}

void write_steps_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << "agent,seed,grad_steps,t,inst_regret,cum_regret\n";
  for (const RunRecord& r : runs) {
    const auto& inst = r.trace.instantaneous();
    const auto& cum = r.trace.cumulative();
    for (std::size_t t = 0; t < inst.size(); ++t) {
      os << r.agent << ',' << r.seed << ',' << r.grad_steps << ',' << (t + 1) << ',' << format_real(inst[t]) << ','
         << format_real(cum[t]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "agent,grad_steps,n_seeds,mean_total_regret,stderr_total_regret\n";
  for (const SummaryRow& r : rows) {
    os << r.agent << ',' << r.grad_steps << ',' << r.n_seeds << ',' << format_real(r.mean_total_regret) << ','
       << format_real(r.stderr_total_regret) << '\n';
  }
}

void write_posterior_csv(std::ostream& os, const std::vector<RunRecord>& runs, const std::string& agent,
                         std::size_t grad_steps) {
  std::size_t dz = 0;
  for (const RunRecord& r : runs) {
    if (r.agent == agent && r.grad_steps == grad_steps && !r.posterior_means.empty()) {
      dz = r.posterior_means.front().size();
      break;
    }
  }
  os << "seed,sample_idx";
  for (std::size_t k = 0; k < dz; ++k) os << ",z_mean_" << k;
  os << '\n';
  for (const RunRecord& r : runs) {
    if (r.agent != agent || r.grad_steps != grad_steps) continue;
    for (std::size_t i = 0; i < r.posterior_means.size(); ++i) {
      os << r.seed << ',' << i;
      for (double v : r.posterior_means[i]) os << ',' << format_real(v);
      os << '\n';
    }
  }
}

void ensure_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
  const auto probe = dir / ".write_probe";
  {
    std::ofstream os(probe);
    if (!os) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RuntimeAbort("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result, const std::filesystem::path& dir) {
  ensure_output_dir(dir);
  {
    auto os = open_output(dir / "steps.csv");
    write_steps_csv(os, result.runs);
  }
  {
    auto os = open_output(dir / "summary.csv");
    write_summary_csv(os, result.summary);
  }
  if (config.posterior_samples > 0) {
    for (const SummaryRow& row : result.summary) {
      if (!is_vae_agent(parse_agent_kind(row.agent))) continue;
      auto os = open_output(dir / ("posterior_" + row.agent + "_g" + std::to_string(row.grad_steps) + ".csv"));
      write_posterior_csv(os, result.runs, row.agent, row.grad_steps);
    }
  }
  if (config.dump_prior) {
    for (std::uint64_t seed : config.seeds) {
      auto os = open_output(dir / ("prior_seed" + std::to_string(seed) + ".csv"));
      env::write_prior_csv(os, make_prior_dataset(config, seed));
    }
  }
}

}  // namespace tbandit::harness
