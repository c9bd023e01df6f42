#include <benchmark/benchmark.h>

#include "zc/analysis.hpp"
#include "zc/config.hpp"
#include "zc/simulator.hpp"

namespace {

void BM_BuildChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto chain = zc::build_chain(n, n);
    benchmark::DoNotOptimize(chain.P.back().back());
  }
}
BENCHMARK(BM_BuildChain)->Arg(32)->Arg(64)->Arg(128);

void BM_ExpectedCycles(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto chain = zc::build_chain(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(zc::expected_cycles(chain));
}
BENCHMARK(BM_ExpectedCycles)->Arg(64)->Arg(128);

void BM_ExactExpectedTime(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto chain = zc::build_chain(n, n);
  const auto t = zc::TimingParameters::explicit_values(2150, 2266, 20, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(zc::exact_expected_time_s(chain, t));
}
BENCHMARK(BM_ExactExpectedTime)->Arg(32)->Arg(64)->Arg(128);

void BM_SimulateConvergence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  zc::ExperimentConfig cfg;
  cfg.protocol = zc::Protocol::Zc;
  cfg.N = cfg.M = n;
  cfg.duration_s = 5.0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto result = zc::simulate(cfg, seed++);
    benchmark::DoNotOptimize(result.metrics.goodput_bps);
  }
}
BENCHMARK(BM_SimulateConvergence)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SimulateCsma(benchmark::State& state) {
  zc::ExperimentConfig cfg;
  cfg.protocol = zc::Protocol::Csma;
  cfg.N = 64;
  cfg.M = static_cast<int>(state.range(0));
  cfg.duration_s = 5.0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto result = zc::simulate(cfg, seed++);
    benchmark::DoNotOptimize(result.metrics.goodput_bps);
  }
}
BENCHMARK(BM_SimulateCsma)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
