#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "tbandit/core/regret.hpp"
#include "tbandit/env/domain.hpp"
#include "tbandit/harness/agents.hpp"

namespace tbandit::harness {

struct ExperimentConfig {
  std::string name = "custom";
  env::DomainPair domains{env::DomainSpec::binary(0.5), env::DomainSpec::binary(0.5)};
  env::BehaviorPolicy policy{};
  std::vector<AgentConfig> agents;
  std::size_t steps = 1000;
  std::vector<std::uint64_t> seeds;
  std::size_t n_prior = 1000;
  /// Gradient-step counts G; each is an independent set of VAE runs.
  std::vector<std::size_t> grad_steps;
  VaeSettings vae{};
  /// 0 lets OpenMP decide.
  std::size_t threads = 0;
  /// Held-out target proxies encoded for the posterior diagnostic (0 = off).
  std::size_t posterior_samples = 1000;
  bool dump_prior = false;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

std::vector<std::uint64_t> seed_range(std::size_t n);

struct RunRecord {
  std::string agent;
  std::uint64_t seed = 0;
  std::size_t grad_steps = 0;  // 0 for agents without a schedule
  RegretTrace trace;
  /// Final p*(z=1) estimate of the binary causal agent; NaN otherwise.
  double pz1_hat = std::numeric_limits<double>::quiet_NaN();
  /// Encoder posterior means of held-out target proxies (VAE agents).
  std::vector<std::vector<double>> posterior_means;

  double total() const { return trace.total(); }
};

struct SummaryRow {
  std::string agent;
  std::size_t grad_steps = 0;
  std::size_t n_seeds = 0;
  double mean_total_regret = 0.0;
  /// Sample standard deviation over seeds / sqrt(n); 0 for a single seed.
  double stderr_total_regret = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // ordered by agent (config order), G, seed
  std::vector<SummaryRow> summary;
};

/// One seed's shared prior dataset.
PriorDataset make_prior_dataset(const ExperimentConfig& config, std::uint64_t seed);

/// All (agent, seed) jobs in parallel over OpenMP threads.
ExperimentResult run_experiment(const ExperimentConfig& config);
/// Reference implementation: the same jobs, one after another.
ExperimentResult run_experiment_serial(const ExperimentConfig& config);

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs);

void write_steps_csv(std::ostream& os, const std::vector<RunRecord>& runs);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
/// Rows `seed,sample_idx,z_mean_0..` for the runs of one (agent, G).
void write_posterior_csv(std::ostream& os, const std::vector<RunRecord>& runs, const std::string& agent,
                         std::size_t grad_steps);

/// Checks the directory can be created and written; throws ConfigError.
void ensure_output_dir(const std::filesystem::path& dir);
/// steps.csv, summary.csv, posterior_<agent>_g<G>.csv and, if requested,
/// prior_seed<s>.csv.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace tbandit::harness
