#include <benchmark/benchmark.h>

#include "tikreg/experiment.hpp"
#include "tikreg/noise.hpp"
#include "tikreg/problems.hpp"
#include "tikreg/select.hpp"

namespace {

using namespace tikreg;

struct Fixture {
  TestProblem problem;
  SvdFactorization f;
  SpectralProblem sp;
  double epsilon;
};

Fixture make_fixture(std::size_t n) {
  Fixture fx{phillips(n), {}, {}, 0.0};
  fx.f = svd(fx.problem.A);
  RngStream rng(1, 0);
  const Vector e = white_noise(fx.problem.b_true, 1e-3, rng);
  fx.sp = to_spectral(fx.f, fx.problem.b_true + e);
  fx.epsilon = e.norm();
  return fx;
}

void BM_Svd(benchmark::State& state) {
  const TestProblem p = phillips(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(svd(p.A));
}
BENCHMARK(BM_Svd)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DiscrepancyMu(benchmark::State& state) {
  const Fixture fx = make_fixture(200);
  for (auto _ : state) benchmark::DoNotOptimize(discrepancy_mu(fx.sp, DiscrepancySpec{fx.epsilon, 1.0}));
}
BENCHMARK(BM_DiscrepancyMu);

void BM_SolveSpectral(benchmark::State& state) {
  const Fixture fx = make_fixture(200);
  const RegMethod m = RegMethod::shift_k(1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectral(fx.sp, m));
}
BENCHMARK(BM_SolveSpectral);

void BM_OptimalMu(benchmark::State& state) {
  const Fixture fx = make_fixture(200);
  const MethodFamily family{MethodKind::ShiftK};
  for (auto _ : state) benchmark::DoNotOptimize(optimal_params(fx.sp, fx.problem.x_true, family));
}
BENCHMARK(BM_OptimalMu)->Unit(benchmark::kMicrosecond);

void BM_ExperimentTrials(benchmark::State& state) {
  ExperimentConfig c;
  c.n = 200;
  c.levels = {1e-3};
  c.runs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c));
}
BENCHMARK(BM_ExperimentTrials)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
