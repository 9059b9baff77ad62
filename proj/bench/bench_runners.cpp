// Serial reference runner vs the OpenMP job scheduler on the same configs.

#include <benchmark/benchmark.h>

#include "tbandit/harness/experiment.hpp"
#include "tbandit/harness/presets.hpp"

namespace {

using namespace tbandit::harness;

ExperimentConfig binary_config(std::size_t seeds) {
  ExperimentConfig cfg = make_preset("binary_1");
  cfg.seeds = seed_range(seeds);
  return cfg;
}

ExperimentConfig vae_config() {
  ExperimentConfig cfg = make_preset("proxy_shift_pos2neg");
  cfg.seeds = seed_range(2);
  cfg.grad_steps = {10, 100};
  cfg.vae.pretrain.epochs = 10;
  cfg.posterior_samples = 0;
  return cfg;
}

void BM_BinarySerial(benchmark::State& state) {
  const auto cfg = binary_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(cfg));
}

void BM_BinaryParallel(benchmark::State& state) {
  const auto cfg = binary_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}

void BM_VaeSerial(benchmark::State& state) {
  const auto cfg = vae_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(cfg));
}

void BM_VaeParallel(benchmark::State& state) {
  const auto cfg = vae_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}

}  // namespace

BENCHMARK(BM_BinarySerial)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BinaryParallel)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VaeSerial)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_VaeParallel)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
