// Serial reference vs OpenMP kernels for the sweep and the surface scan, plus
// the single-solve costs they are built from.

#include "secrecy/algorithms.hpp"
#include "secrecy/scan.hpp"
#include "secrecy/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace secrecy;

namespace {

ExperimentConfig small_sweep() {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.trials = 4;
  cfg.p_db_grid = {0.0, 5.0, 10.0};
  return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
  const ExperimentConfig cfg = small_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(sweep(cfg, false).rows.size());
}

void BM_SweepParallel(benchmark::State& state) {
  const ExperimentConfig cfg = small_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(sweep(cfg, true).rows.size());
}

void BM_ScanSerial(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.k = 2;
  for (auto _ : state) benchmark::DoNotOptimize(scan_surface(cfg, 5.0, 0, 20, false).log_f.size());
}

void BM_ScanParallel(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.k = 2;
  for (auto _ : state) benchmark::DoNotOptimize(scan_surface(cfg, 5.0, 0, 20, true).log_f.size());
}

void BM_SolvePa(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.k = static_cast<int>(state.range(0));
  const ChannelDraw d = gen_channels(cfg, 0);
  CrProblem p{{d.hs, d.eavesdroppers, db_to_linear(5.0)}, RealVector::Constant(cfg.k, 0.5)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_pa(p, CrOptions{1e-9, 500, 40, std::nullopt}).capacity);
}

void BM_Algorithm1(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.k = static_cast<int>(state.range(0));
  const SecrecyProblem p = single_antenna_problem(gen_channels(cfg, 0), 1.0, db_to_linear(5.0));
  for (auto _ : state) benchmark::DoNotOptimize(algorithm1(p, 1e-3).secrecy_rate);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SolvePa)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Algorithm1)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
