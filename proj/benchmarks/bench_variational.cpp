#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "varfrac/variational.hpp"

using namespace varfrac;

static void BM_Functional(benchmark::State& state) {
  const VariationalProblem p = example_problem(1, example_defaults(1));
  const DiscreteProblem d(p, QuadratureSpec{});
  std::vector<double> y(d.mesh().points);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = d.mesh().node(i) * d.mesh().node(i);
  for (auto _ : state) benchmark::DoNotOptimize(d.functional(y));
}
BENCHMARK(BM_Functional);

static void BM_Residual(benchmark::State& state) {
  const VariationalProblem p = example_problem(1, example_defaults(1));
  const DiscreteProblem d(p, QuadratureSpec{});
  std::vector<double> y(d.mesh().points);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = d.mesh().node(i) * d.mesh().node(i);
  for (auto _ : state) benchmark::DoNotOptimize(d.residual(y));
}
BENCHMARK(BM_Residual);

static void BM_DiscreteProblemSetup(benchmark::State& state) {
  const VariationalProblem p = example_problem(2, example_defaults(2));
  for (auto _ : state) benchmark::DoNotOptimize(DiscreteProblem(p, QuadratureSpec{}));
}
BENCHMARK(BM_DiscreteProblemSetup)->Unit(benchmark::kMillisecond);

static void BM_RitzExample2(benchmark::State& state) {
  const VariationalProblem p = example_problem(2, example_defaults(2));
  const DiscreteProblem d(p, QuadratureSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(ritz_minimize(d, 5));
}
BENCHMARK(BM_RitzExample2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
