#include <benchmark/benchmark.h>

#include "xlp/attribution.hpp"
#include "xlp/energy.hpp"
#include "xlp/problems.hpp"

using namespace xlp;

static void BM_SolveLp(benchmark::State& state) {
  const Problem p = case_problem(static_cast<CaseId>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(p).objective);
  state.SetLabel(to_string(static_cast<CaseId>(state.range(0))));
}
BENCHMARK(BM_SolveLp)->Arg(static_cast<int>(CaseId::RO1))->Arg(static_cast<int>(CaseId::MF1));

static void BM_SolveIlp(benchmark::State& state) {
  const Problem p = case_problem(CaseId::KS3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_ilp(p).objective);
}
BENCHMARK(BM_SolveIlp);

static void BM_IntegratedGradients(benchmark::State& state) {
  const Problem p = case_problem(CaseId::MF1);
  const Baseline base = make_baseline(p, BaselineKind::kNearZero);
  AttributionOptions o;
  o.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrated_gradients(p, base, o).scores_b.sum());
}
BENCHMARK(BM_IntegratedGradients)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_EnergyDesign(benchmark::State& state) {
  const EnergyInstance e = synth_energy(42, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_energy_design(e).objective);
}
BENCHMARK(BM_EnergyDesign)->Arg(720)->Arg(8760)->Unit(benchmark::kMillisecond);

static void BM_EnergyLp(benchmark::State& state) {
  const EnergyInstance e = synth_energy(42, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_energy_design_lp(e).objective);
}
BENCHMARK(BM_EnergyLp)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
