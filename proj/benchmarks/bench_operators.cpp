#include <benchmark/benchmark.h>

#include <cmath>

#include "varfrac/operators.hpp"
#include "varfrac/quadrature.hpp"

using namespace varfrac;

static void BM_IntegrateSingular(benchmark::State& state) {
  const double lo = static_cast<double>(state.range(0)) / 100.0;
  SingularIntegrand in;
  in.exponent = [lo](double, double tau) { return lo + 0.2 * tau; };
  in.exponent_lo = lo;
  in.exponent_hi = lo + 0.2;
  in.density = [](double tau) { return std::cos(tau); };
  const QuadratureSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_singular(in, 0.0, 1.0, spec));
}
BENCHMARK(BM_IntegrateSingular)->Arg(10)->Arg(50)->Arg(80);

static void BM_IntegralMatrix(benchmark::State& state) {
  const Mesh mesh(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const auto order = OrderFunction::parse("0.4 + 0.2*tau*t", 0.4, 0.6, 3, 0.0, 1.0);
  const QuadratureSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_matrix(OperatorKind::left_integral, mesh, order, spec));
  }
}
BENCHMARK(BM_IntegralMatrix)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

static void BM_CaputoMatrix(benchmark::State& state) {
  const Mesh mesh(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const auto order = OrderFunction::constant(0.3, 3, 0.0, 1.0);
  const QuadratureSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_matrix(OperatorKind::right_caputo, mesh, order, spec));
  }
}
BENCHMARK(BM_CaputoMatrix)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

static void BM_PointEvaluation(benchmark::State& state) {
  const Mesh mesh(0.0, 1.0, 201);
  const auto order = OrderFunction::constant(0.5, 3, 0.0, 1.0);
  const auto f = GridFunction::sample(mesh, [](double t) { return std::exp(t); });
  const QuadratureSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(left_rl_integral(f, order, 0.7, spec));
}
BENCHMARK(BM_PointEvaluation);
