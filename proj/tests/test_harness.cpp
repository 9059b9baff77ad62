#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tbandit/core/error.hpp"
#include "tbandit/harness/agents.hpp"
#include "tbandit/harness/config.hpp"
#include "tbandit/harness/csv.hpp"
#include "tbandit/harness/episode.hpp"
#include "tbandit/harness/experiment.hpp"
#include "tbandit/harness/presets.hpp"

using namespace tbandit;
using namespace tbandit::harness;

namespace {

class OracleAgent final : public Agent {
 public:
  explicit OracleAgent(const env::DomainSpec& spec) : spec_(spec) {}
  std::string name() const override { return "oracle"; }
  Arm select(std::span<const double>) override { return env::optimal_arm(spec_, z_).arm; }
  void observe(std::span<const double>, Arm, double) override {}
  void see(std::span<const double> z) { z_.assign(z.begin(), z.end()); }

 private:
  const env::DomainSpec& spec_;
  std::vector<double> z_;
};

class ThrowingAgent final : public Agent {
 public:
  std::string name() const override { return "bad"; }
  Arm select(std::span<const double>) override {
    if (++calls_ == 7) throw std::runtime_error("boom");
    return 0;
  }
  void observe(std::span<const double>, Arm, double) override {}

 private:
  int calls_ = 0;
};

ExperimentConfig binary_config(std::size_t seeds) {
  ExperimentConfig cfg = make_preset("binary_1");
  cfg.seeds = seed_range(seeds);
  return cfg;
}

std::string steps_csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_steps_csv(os, r.runs);
  return os.str();
}

std::string summary_csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_summary_csv(os, r.summary);
  return os.str();
}

ExperimentConfig tiny_vae_config() {
  ExperimentConfig cfg = make_preset("proxy_shift_pos2neg");
  cfg.seeds = seed_range(2);
  cfg.steps = 60;
  cfg.n_prior = 100;
  cfg.grad_steps = {3, 20};
  cfg.vae.hidden = {8, 8};
  cfg.vae.pretrain.epochs = 3;
  cfg.posterior_samples = 10;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TBANDIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("oracle agent has zero regret") {
  for (const char* preset : {"binary_1", "lingauss_negative_transfer", "proxy_shift_pos2neg"}) {
    const ExperimentConfig cfg = make_preset(preset);
    OracleAgent oracle(cfg.domains.target);
    const RegretTrace tr = run_episode(cfg.domains.target, oracle, 500, episode_streams(3), 3,
                                       [&](std::span<const double> z) { oracle.see(z); });
    CHECK(tr.size() == 500);
    CHECK(tr.total() == 0.0);
  }
}

TEST_CASE("random agent on a balanced binary target") {
  const auto target = env::DomainSpec::binary(0.5);
  double total = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    RandomAgent agent(2, Rng(s, 99));
    total += run_episode(target, agent, 1000, episode_streams(s), s).total();
  }
  // Per-step regret is Bernoulli(1/2): SE of the mean is 0.5 / sqrt(50000).
  CHECK(std::abs(total / (seeds * 1000.0) - 0.5) < 3 * 0.5 / std::sqrt(seeds * 1000.0));
}

TEST_CASE("agent exceptions carry context") {
  ThrowingAgent bad;
  try {
    run_episode(env::DomainSpec::binary(0.5), bad, 20, episode_streams(4), 4);
    FAIL("expected an abort");
  } catch (const RuntimeAbort& e) {
    const std::string what = e.what();
    CHECK(what.find("bad") != std::string::npos);
    CHECK(what.find("seed 4") != std::string::npos);
  }
}

TEST_CASE("binary experiment shape and trace invariants") {
  const ExperimentConfig cfg = binary_config(4);
  const ExperimentResult r = run_experiment(cfg);
  CHECK(r.runs.size() == 5 * 4);
  CHECK(r.summary.size() == 5);
  for (const RunRecord& run : r.runs) {
    CHECK(run.trace.size() == cfg.steps);
    CHECK(run.total() == run.trace.cumulative().back());
    CHECK(run.grad_steps == 0);
    CHECK(std::isnan(run.pz1_hat) == (run.agent != "causal_binary"));
  }
}

TEST_CASE("summary mean is the arithmetic mean of totals") {
  const ExperimentResult r = run_experiment(binary_config(7));
  for (const SummaryRow& row : r.summary) {
    std::vector<double> totals;
    for (const RunRecord& run : r.runs)
      if (run.agent == row.agent) totals.push_back(run.total());
    REQUIRE(totals.size() == 7);
    double s = 0;
    for (double t : totals) s += t;
    CHECK(row.mean_total_regret == s / 7.0);
    double ss = 0;
    for (double t : totals) ss += (t - s / 7.0) * (t - s / 7.0);
    CHECK(row.stderr_total_regret == doctest::Approx(std::sqrt(ss / 6.0 / 7.0)));
  }
}

TEST_CASE("single seed reports zero standard error") {
  const auto rows = summarize(run_experiment(binary_config(1)).runs);
  for (const auto& row : rows) CHECK(row.stderr_total_regret == 0.0);
}

TEST_CASE("traces do not depend on agent order") {
  ExperimentConfig a = binary_config(3);
  ExperimentConfig b = a;
  std::reverse(b.agents.begin(), b.agents.end());
  const auto ra = run_experiment(a), rb = run_experiment(b);
  for (const RunRecord& x : ra.runs) {
    const auto it = std::find_if(rb.runs.begin(), rb.runs.end(),
                                 [&](const RunRecord& y) { return y.agent == x.agent && y.seed == x.seed; });
    REQUIRE(it != rb.runs.end());
    CHECK(it->trace.instantaneous() == x.trace.instantaneous());
  }
}

TEST_CASE("parallel and serial runners agree byte for byte") {
  const ExperimentConfig bin = binary_config(6);
  CHECK(steps_csv(run_experiment(bin)) == steps_csv(run_experiment_serial(bin)));
  const ExperimentConfig v = tiny_vae_config();
  const auto par = run_experiment(v), ser = run_experiment_serial(v);
  CHECK(steps_csv(par) == steps_csv(ser));
  CHECK(summary_csv(par) == summary_csv(ser));
  REQUIRE(par.runs.size() == ser.runs.size());
  for (std::size_t i = 0; i < par.runs.size(); ++i) CHECK(par.runs[i].posterior_means == ser.runs[i].posterior_means);
}

TEST_CASE("vae experiment counts one run per agent, G and seed") {
  const ExperimentConfig v = tiny_vae_config();
  const auto r = run_experiment(v);
  CHECK(r.runs.size() == 3 * 2 * 2);
  CHECK(r.summary.size() == 3 * 2);
  for (const RunRecord& run : r.runs) {
    CHECK(run.posterior_means.size() == 10);
    CHECK((run.grad_steps == 3 || run.grad_steps == 20));
  }
}

TEST_CASE("full preset sweep yields 150 vae runs") {
  ExperimentConfig cfg = make_preset("proxy_shift_pos2neg");
  CHECK(cfg.grad_steps.size() * cfg.agents.size() * cfg.seeds.size() == 150);
}

TEST_CASE("vae agents differ only by initialization") {
  // A causal_vae agent handed the vae_prior model reproduces vae_prior's trace.
  const ExperimentConfig cfg = tiny_vae_config();
  const std::uint64_t seed = 1;
  const PriorDataset prior = make_prior_dataset(cfg, seed);
  const std::size_t dim_w = cfg.domains.target.dim_w();
  const auto prior_model = prepare_vae_model(AgentKind::VaePrior, cfg.vae, prior, dim_w, seed);
  const auto causal_model = prepare_vae_model(AgentKind::CausalVae, cfg.vae, prior, dim_w, seed);
  auto run = [&](AgentKind label, const vae::VaeModel& m) {
    auto agent = make_vae_agent({.kind = label}, cfg.vae, m, cfg.steps, 20, seed);
    return run_episode(cfg.domains.target, *agent, cfg.steps, episode_streams(seed), seed).instantaneous();
  };
  CHECK(run(AgentKind::CausalVae, prior_model) == run(AgentKind::VaePrior, prior_model));
  CHECK(run(AgentKind::VaePrior, causal_model) == run(AgentKind::CausalVae, causal_model));
  CHECK(run(AgentKind::Vae, causal_model) == run(AgentKind::CausalVae, causal_model));
}

TEST_CASE("shared initialization across vae agents") {
  const ExperimentConfig cfg = tiny_vae_config();
  const PriorDataset prior = make_prior_dataset(cfg, 0);
  const auto plain = prepare_vae_model(AgentKind::Vae, cfg.vae, prior, 25, 0);
  const auto causal = prepare_vae_model(AgentKind::CausalVae, cfg.vae, prior, 25, 0);
  // Decoder pretraining never touches the encoder.
  CHECK(std::vector<double>(plain.encoder().parameters()[0].values().begin(),
                            plain.encoder().parameters()[0].values().end()) ==
        std::vector<double>(causal.encoder().parameters()[0].values().begin(),
                            causal.encoder().parameters()[0].values().end()));
}

TEST_CASE("prior data is shared within a seed") {
  const ExperimentConfig cfg = binary_config(2);
  const auto a = make_prior_dataset(cfg, 1), b = make_prior_dataset(cfg, 1), c = make_prior_dataset(cfg, 0);
  REQUIRE(a.size() == cfg.n_prior);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].w == b[i].w && a[i].x == b[i].x;
    differs = differs || a[i].w != c[i].w || a[i].x != c[i].x;
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("warm start helps without shift") {
  ExperimentConfig cfg = binary_config(100);
  cfg.domains = env::make_domain_pair(env::DomainSpec::binary(0.5), env::ContextParams::bernoulli(0.5),
                                      env::ContextParams::bernoulli(0.5));
  cfg.agents = {{.kind = AgentKind::Cts}, {.kind = AgentKind::CtsMinus}};
  const auto r = run_experiment(cfg);
  CHECK(r.summary[1].mean_total_regret <= r.summary[0].mean_total_regret);
}

TEST_CASE("preset catalog") {
  std::vector<std::string> names;
  for (const auto& p : list_presets()) names.push_back(p.name);
  for (const char* n : {"binary_1", "binary_2", "binary_3", "binary_4", "lingauss_negative_transfer",
                        "proxy_shift_pos2neg", "proxy_shift_neg2pos", "proxy_extreme_pos2neg", "proxy_extreme_neg2pos"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());

  const auto b3 = make_preset("binary_3");
  CHECK(b3.domains.source.context().c == 0.9);
  CHECK(b3.domains.target.context().c == 0.1);
  CHECK(b3.seeds.size() == 100);
  CHECK(b3.n_prior == 1000);
}

TEST_CASE("shift presets") {
  const auto s = make_preset("proxy_shift_pos2neg");
  CHECK(s.domains.source.context().mean == std::vector<double>{1.0});
  CHECK(s.domains.target.context().mean == std::vector<double>{-1.0});
  CHECK(s.seeds.size() == 5);
  const auto e = make_preset("proxy_extreme_pos2neg");
  CHECK(e.domains.source.context().truncation == env::Truncation::PositiveOnly);
  CHECK(e.domains.target.context().truncation == env::Truncation::NegativeOnly);
  const auto l = make_preset("lingauss_negative_transfer");
  CHECK(l.domains.source.context().mean == std::vector<double>{8.0});
  CHECK(l.domains.target.context().mean == std::vector<double>{2.0});
  CHECK_THROWS_AS(make_preset("nope"), ConfigError);
}

TEST_CASE("csv headers and formatting") {
  ExperimentConfig cfg = binary_config(1);
  cfg.steps = 3;
  const auto r = run_experiment(cfg);
  const std::string steps = steps_csv(r);
  CHECK(steps.rfind("agent,seed,grad_steps,t,inst_regret,cum_regret\n", 0) == 0);
  CHECK(std::count(steps.begin(), steps.end(), '\n') == 1 + 5 * 3);
  CHECK(summary_csv(r).rfind("agent,grad_steps,n_seeds,mean_total_regret,stderr_total_regret\n", 0) == 0);
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(split_csv_line("a,,b") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("written outputs are reproducible") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "tbandit_test_outputs";
  fs::remove_all(base);
  ExperimentConfig cfg = tiny_vae_config();
  cfg.dump_prior = true;
  for (const char* sub : {"a", "b"}) {
    ensure_output_dir(base / sub);
    write_outputs(cfg, run_experiment(cfg), base / sub);
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  };
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    ++files;
    CHECK(slurp(entry.path()) == slurp(base / "b" / entry.path().filename()));
  }
  CHECK(files == 2 + 3 * 2 + 2);
  CHECK(fs::exists(base / "a" / "posterior_causal_vae_g20.csv"));
  CHECK(slurp(base / "a" / "posterior_vae_g3.csv").rfind("seed,sample_idx,z_mean_0\n", 0) == 0);
  fs::remove_all(base);
}

TEST_CASE("unwritable output directory is a config error") {
  CHECK_THROWS_AS(ensure_output_dir("/proc/tbandit/cannot"), ConfigError);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = binary_config(2);
  cfg.validate();
  ExperimentConfig dup = cfg;
  dup.agents.push_back(dup.agents.front());
  CHECK_THROWS_AS(dup.validate(), ConfigError);
  ExperimentConfig wrong = cfg;
  wrong.agents = {{.kind = AgentKind::CausalVae}};
  CHECK_THROWS_AS(wrong.validate(), ConfigError);
  ExperimentConfig zero = cfg;
  zero.steps = 0;
  CHECK_THROWS_AS(zero.validate(), ConfigError);
  ExperimentConfig g = tiny_vae_config();
  g.grad_steps = {61};
  CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("toml config with preset and overrides") {
  const auto cfg = parse_config(R"(
[experiment]
preset = "binary_2"
seeds = 3
steps = 50

[[agents]]
id = "causal_binary"
smoothing = 0.5
)");
  CHECK(cfg.domains.target.context().c == 0.9);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(cfg.steps == 50);
  REQUIRE(cfg.agents.size() == 1);
  CHECK(cfg.agents[0].smoothing == 0.5);
}

TEST_CASE("toml config with an explicit environment") {
  const auto cfg = parse_config(R"(
[environment]
variant = "nonlinear_proxy"
source_mean = [0.5]
target_mean = [-0.5]
target_truncation = "negative"
dim_w = 7

[experiment]
seeds = [4, 9]
grad_steps = [5, 10]
hidden = [12, 12]
activation = "tanh"
epochs = 4

[[agents]]
id = "vae"
[[agents]]
id = "random"
)");
  CHECK(cfg.domains.source.dim_w() == 7);
  CHECK(cfg.domains.target.context().truncation == env::Truncation::NegativeOnly);
  CHECK(cfg.domains.source.same_mechanisms(cfg.domains.target));
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 9});
  CHECK(cfg.vae.hidden == std::vector<std::size_t>{12, 12});
  CHECK(cfg.vae.activation == nn::Activation::Tanh);
  CHECK(cfg.vae.pretrain.epochs == 4);
  CHECK(cfg.agents.size() == 2);
}

TEST_CASE("toml errors") {
  CHECK_THROWS_AS(parse_config("[experiment]\nstepz = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[environment]\nvariant = \"binary\"\nsource_c = 0.5\ntarget_c = 0.5\ncolour = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"binary_1\"\n[[agents]]\nid = \"ghost\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nsteps = \"many\"\n"), ConfigError);
  try {
    parse_config("\n\n[experiment]\nbogus = 1\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK(parse_size_list("1,10,40", "g") == std::vector<std::size_t>{1, 10, 40});
  CHECK_THROWS_AS(parse_size_list("1,x", "g"), ConfigError);
  CHECK(parse_agent_list("cts,random").size() == 2);
}

TEST_CASE("cli exit codes") {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "tbandit_cli_test";
  fs::remove_all(out);
  CHECK(run_cli("presets") == 0);
  CHECK(run_cli("run --preset binary_1 --seeds 2 --steps 20 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(run_cli("run --preset no_such_preset") == 2);
  CHECK(run_cli("run --preset binary_1 --agents vae --out " + out.string()) == 2);
  CHECK(run_cli("run --bogus-flag") == 2);
  CHECK(run_cli("run --preset binary_1 --seeds 1 --steps 5 --out /proc/tbandit/x") == 2);
  CHECK(run_cli("probe-corollary1 --preset lingauss_negative_transfer") == 2);

  const fs::path cfg = out / "bad.toml";
  {
    std::ofstream os(cfg);
    // One unsmoothed prior record leaves a context cell empty: the CPT is undefined.
    os << "[environment]\nvariant = \"binary\"\nsource_c = 0.5\ntarget_c = 0.5\n"
          "[experiment]\nseeds = 1\nsteps = 10\nn_prior = 1\n"
          "[[agents]]\nid = \"causal_binary\"\nsmoothing = 0.0\n";
  }
  CHECK(run_cli("run --config " + cfg.string() + " --out " + (out / "bad").string()) == 3);
  fs::remove_all(out);
}
