#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "varfrac/errors.hpp"
#include "varfrac/grid_function.hpp"

using varfrac::GridFunction;
using varfrac::Mesh;

TEST(Mesh, NodesAndStep) {
  const Mesh m(0.0, 1.0, 11);
  EXPECT_EQ(m.intervals(), 10u);
  EXPECT_DOUBLE_EQ(m.step(), 0.1);
  EXPECT_DOUBLE_EQ(m.node(0), 0.0);
  EXPECT_EQ(m.node(10), 1.0);
  EXPECT_EQ(m.nodes().size(), 11u);
  EXPECT_EQ(m.cell_of(0.0), 0u);
  EXPECT_EQ(m.cell_of(1.0), 9u);
  EXPECT_EQ(m.cell_of(0.55), 5u);
}

TEST(Mesh, RejectsBadIntervals) {
  EXPECT_THROW(Mesh(1.0, 0.0, 11), varfrac::DomainError);
  EXPECT_THROW(Mesh(0.0, 0.0, 11), varfrac::DomainError);
  EXPECT_THROW(Mesh(0.0, 1.0, 4), varfrac::DomainError);
}

TEST(DifferentiateSamples, ExactForQuartics) {
  const Mesh m(-0.5, 1.5, 21);
  std::vector<double> v;
  for (double t : m.nodes()) v.push_back(t * t * t * t - 2 * t * t + t - 3);
  const auto d = varfrac::differentiate_samples(v, m.step());
  for (std::size_t i = 0; i < m.points; ++i) {
    const double t = m.node(i);
    EXPECT_NEAR(d[i], 4 * t * t * t - 4 * t + 1, 1e-11) << "node " << i;
  }
}

TEST(DifferentiateSamples, FourthOrderConvergence) {
  double previous = 0.0;
  for (std::size_t n : {21u, 41u, 81u}) {
    const Mesh m(0.0, 2.0, n);
    std::vector<double> v;
    for (double t : m.nodes()) v.push_back(std::exp(t));
    const auto d = varfrac::differentiate_samples(v, m.step());
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(d[i] - std::exp(m.node(i))));
    if (previous > 0.0) EXPECT_GT(previous / err, 12.0);
    previous = err;
  }
}

TEST(GridFunction, InterpolatesNodesExactly) {
  const Mesh m(0.0, 1.0, 9);
  const GridFunction f = GridFunction::sample(m, [](double t) { return std::sin(3 * t); });
  for (std::size_t i = 0; i < m.points; ++i) EXPECT_EQ(f(m.node(i)), f[i]);
}

TEST(GridFunction, ReproducesCubics) {
  const Mesh m(0.0, 1.0, 11);
  auto p = [](double t) { return 2 * t * t * t - t * t + 0.5 * t - 1; };
  const GridFunction f = GridFunction::sample(m, p);
  for (double t = 0.0; t <= 1.0; t += 0.0137) EXPECT_NEAR(f(t), p(t), 1e-13) << t;
}

TEST(GridFunction, InterpolationIsLinearInSamples) {
  const Mesh m(0.0, 1.0, 17);
  const GridFunction f = GridFunction::sample(m, [](double t) { return std::cos(5 * t); });
  const GridFunction g = GridFunction::sample(m, [](double t) { return t * t * t * t; });
  std::vector<double> sum;
  for (std::size_t i = 0; i < m.points; ++i) sum.push_back(2 * f[i] - 3 * g[i]);
  const GridFunction h(m, sum);
  for (double t = 0.0; t <= 1.0; t += 0.031) EXPECT_NEAR(h(t), 2 * f(t) - 3 * g(t), 1e-14);
}

TEST(GridFunction, HermiteWeightsMatchEvaluation) {
  const Mesh m(0.0, 1.0, 13);
  const GridFunction f = GridFunction::sample(m, [](double t) { return std::exp(-t) * std::sin(4 * t); });
  for (double t = 0.0; t <= 1.0; t += 0.043) {
    const auto w = varfrac::hermite_weights(m, t);
    const double v = w.value_lo * f[w.cell] + w.value_hi * f[w.cell + 1] + w.slope_lo * f.slopes()[w.cell] +
                     w.slope_hi * f.slopes()[w.cell + 1];
    EXPECT_NEAR(v, f(t), 1e-14);
  }
}

TEST(GridFunction, RejectsNonFiniteValues) {
  const Mesh m(0.0, 1.0, 5);
  EXPECT_THROW(GridFunction(m, {0, 1, NAN, 3, 4}), varfrac::DomainError);
  EXPECT_THROW(GridFunction(m, {0, 1, 2}), varfrac::DomainError);
}
