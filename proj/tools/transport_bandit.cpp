// transport-bandit: run the latent-context bandit experiments from the
// command line.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tbandit/core/error.hpp"
#include "tbandit/harness/config.hpp"
#include "tbandit/harness/csv.hpp"
#include "tbandit/harness/experiment.hpp"
#include "tbandit/harness/presets.hpp"
#include "tbandit/vae/probe.hpp"

namespace {

using namespace tbandit;
using namespace tbandit::harness;

struct RunArgs {
  std::string preset;
  std::string config;
  std::string out;
  std::optional<std::size_t> seeds;
  std::optional<std::size_t> steps;
  std::string grad_steps;
  std::string agents;
  std::optional<std::size_t> threads;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg = args.preset.empty() ? load_config_file(args.config) : make_preset(args.preset);
  if (args.seeds) cfg.seeds = seed_range(*args.seeds);
  if (args.steps) cfg.steps = *args.steps;
  if (!args.grad_steps.empty()) cfg.grad_steps = parse_size_list(args.grad_steps, "--grad-steps");
  if (!args.agents.empty()) cfg.agents = parse_agent_list(args.agents);
  if (args.threads) cfg.threads = *args.threads;
  cfg.validate();

  const std::filesystem::path out = args.out.empty() ? std::filesystem::path("results") / cfg.name : std::filesystem::path(args.out);
  ensure_output_dir(out);

  std::cerr << "running " << cfg.name << ": " << cfg.agents.size() << " agent(s) x " << cfg.seeds.size()
            << " seed(s), T=" << cfg.steps << '\n';
  const ExperimentResult result = run_experiment(cfg);
  write_outputs(cfg, result, out);

  std::printf("%-14s %10s %8s %18s %14s\n", "agent", "grad_steps", "n_seeds", "mean_total_regret", "stderr");
  for (const SummaryRow& r : result.summary) {
    std::printf("%-14s %10zu %8zu %18.4f %14.4f\n", r.agent.c_str(), r.grad_steps, r.n_seeds, r.mean_total_regret,
                r.stderr_total_regret);
  }
  std::cerr << "wrote " << (out / "steps.csv").string() << " and " << (out / "summary.csv").string() << '\n';
  return 0;
}

int cmd_presets() {
  for (const PresetInfo& p : list_presets()) std::printf("%-28s %s\n", p.name.c_str(), p.description.c_str());
  return 0;
}

void print_probe(const vae::ProbeResult& r) {
  std::printf("samples                 %zu\n", r.n_samples);
  std::printf("two-decoder  |E grad|/n %s\n", format_real(r.g_two_decoder).c_str());
  std::printf("autoencoder  |E grad|/n %s\n", format_real(r.g_autoencoder).c_str());
  std::printf("two-decoder within 3 SE of zero: %s\n", r.two_decoder_consistent_with_zero() ? "yes" : "no");
  if (r.two_decoder_mean.size() <= 8) {
    for (std::size_t k = 0; k < r.two_decoder_mean.size(); ++k) {
      std::printf("  theta_%zu  two-decoder %+.5f (se %.5f)   autoencoder %+.5f (se %.5f)\n", k,
                  r.two_decoder_mean[k], r.two_decoder_se[k], r.autoencoder_mean[k], r.autoencoder_se[k]);
    }
  }
}

int cmd_probe(const std::string& preset, std::uint64_t seed) {
  const ExperimentConfig cfg = make_preset(preset);
  const env::DomainSpec& source = cfg.domains.source;
  const env::DomainSpec& target = cfg.domains.target;
  Rng rng(seed, derive_stream(stable_hash("corollary1"), stream::kProbe));
  if (source.variant() == env::Variant::Binary) {
    // Exact source mechanism p(w=1|z) plugged in as theta_1.
    print_probe(vae::corollary1_probe_binary({0.1, 0.8}, source.context().c, target.context().c, 10000, rng));
    return 0;
  }
  if (source.variant() != env::Variant::NonlinearProxy) {
    throw ConfigError("probe-corollary1 supports binary and proxy presets");
  }
  const PriorDataset prior = make_prior_dataset(cfg, seed);
  const vae::VaeModel decoders = prepare_vae_model(AgentKind::CausalVae, cfg.vae, prior, target.dim_w(), seed);
  const vae::VaeModel autoencoder = prepare_vae_model(AgentKind::VaePrior, cfg.vae, prior, target.dim_w(), seed);
  print_probe(vae::corollary1_probe_neural(decoders, autoencoder, target, 1000, rng));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer learning for latent contextual bandits under covariate shift"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV results");
  auto* preset_opt = run->add_option("--preset", run_args.preset, "Named preset (see `presets`)");
  auto* config_opt = run->add_option("--config", run_args.config, "TOML experiment file");
  preset_opt->excludes(config_opt);
  run->add_option("--out", run_args.out, "Output directory (default results/<name>)");
  run->add_option("--seeds", run_args.seeds, "Number of seeds (0..n-1)");
  run->add_option("--steps", run_args.steps, "Episode length T");
  run->add_option("--grad-steps", run_args.grad_steps, "Comma-separated gradient-step counts G");
  run->add_option("--agents", run_args.agents, "Comma-separated agent ids");
  run->add_option("--threads", run_args.threads, "Worker threads (default: all)");

  app.add_subcommand("presets", "List the named presets");

  std::string probe_preset;
  std::uint64_t probe_seed = 0;
  auto* probe = app.add_subcommand("probe-corollary1", "Expected theta_1 gradients on the target domain");
  probe->add_option("--preset", probe_preset, "Binary or proxy preset")->required();
  probe->add_option("--seed", probe_seed, "Seed for the probe samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      if (run_args.preset.empty() && run_args.config.empty()) {
        std::cerr << "error: run needs --preset or --config\n";
        return 2;
      }
      return cmd_run(run_args);
    }
    if (probe->parsed()) return cmd_probe(probe_preset, probe_seed);
    return cmd_presets();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const RuntimeAbort& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return 3;
  }
}
