// Serial reference vs OpenMP kernels. Arguments: {n, exec} with exec 0 =
// serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "dyadcov/jackknife.hpp"
#include "dyadcov/simulate.hpp"

using namespace dyadcov;

namespace {

SimSample make_sample(int n) {
  SimConfig cfg;
  cfg.n = n;
  cfg.rho = 0.5;
  NormalStream stream(99);
  return gen_dyadic_sample(cfg, stream);
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void BM_MeatDyadic(benchmark::State& state) {
  const auto sample = make_sample(static_cast<int>(state.range(0)));
  const auto fit = fit_ols(sample.ds);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        meat_dyadic(fit.scores, sample.ds.dyads, sample.ds.n, exec_of(state)));
}

void BM_MeatDN(benchmark::State& state) {
  const auto sample = make_sample(static_cast<int>(state.range(0)));
  const auto fit = fit_ols(sample.ds);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        meat_dn(fit.scores, sample.ds.dyads, sample.ds.n, 4, exec_of(state)));
}

void BM_Jackknife(benchmark::State& state) {
  const auto sample = make_sample(static_cast<int>(state.range(0)));
  const auto fit = fit_ols(sample.ds);
  for (auto _ : state)
    benchmark::DoNotOptimize(jk_variance(sample.ds, fit, 4, true, exec_of(state)).V);
}

void BM_MonteCarlo(benchmark::State& state) {
  SimConfig cfg;
  cfg.reps = 16;
  cfg.rho = 0.5;
  const int threads = state.range(0) == 0 ? 1 : 8;
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(cfg, threads).mean_L);
}

}  // namespace

BENCHMARK(BM_MeatDyadic)->ArgsProduct({{50, 156}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeatDN)->ArgsProduct({{50, 156}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Jackknife)->ArgsProduct({{50, 156}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
