#include <benchmark/benchmark.h>

#include "dicke/exact_diag.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/spectrum.hpp"
#include "dicke/sweep.hpp"

namespace {

using dicke::InverseTemperature;
using dicke::ModelParams;

const ModelParams kZ2{1, 1, 0.6, 0.6};

void BM_CriticalBeta(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dicke::critical_beta(kZ2));
}
BENCHMARK(BM_CriticalBeta);

void BM_SolveGap(benchmark::State& state) {
  const InverseTemperature beta(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(dicke::solve_gap(kZ2, beta));
}
BENCHMARK(BM_SolveGap);

void BM_FreeEnergy(benchmark::State& state) {
  const InverseTemperature beta(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(dicke::free_energy_per_atom(kZ2, beta));
}
BENCHMARK(BM_FreeEnergy);

void BM_SpectrumClosedForm(benchmark::State& state) {
  const InverseTemperature beta(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(dicke::spectrum(kZ2, beta));
}
BENCHMARK(BM_SpectrumClosedForm);

void BM_SpectrumKernelRoots(benchmark::State& state) {
  const InverseTemperature beta(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(dicke::spectrum_via_kernel_roots(kZ2, beta));
}
BENCHMARK(BM_SpectrumKernelRoots);

void BM_LogPartitionRatio(benchmark::State& state) {
  const InverseTemperature beta(1.0);
  const ModelParams p{1, 1, 0.3, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dicke::log_partition_ratio(p, beta, 1000, state.range(0)));
  }
}
BENCHMARK(BM_LogPartitionRatio)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_ThermalObservables(benchmark::State& state) {
  dicke::EDConfig cfg;
  cfg.n_atoms = static_cast<int>(state.range(0));
  cfg.params = {1, 1, 0.3, 0.1};
  cfg.beta = InverseTemperature(2.0);
  cfg.n_max = dicke::default_fock_cutoff(cfg.n_atoms, cfg.params, cfg.beta);
  for (auto _ : state) benchmark::DoNotOptimize(dicke::thermal_observables(cfg, 2));
}
BENCHMARK(BM_ThermalObservables)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SweepGap(benchmark::State& state) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "g1", "start": 0.05, "stop": 1.0, "count": 40},
             {"name": "beta", "start": 0.5, "stop": 10.0, "count": 40}],
    "fixed": {"g2": 0.3},
    "tasks": ["gap", "spectrum"]})");
  for (auto _ : state) {
    benchmark::DoNotOptimize(dicke::run_sweep(spec, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_SweepGap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
