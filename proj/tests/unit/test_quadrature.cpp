#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "varfrac/errors.hpp"
#include "varfrac/gamma.hpp"
#include "varfrac/quadrature.hpp"

using varfrac::QuadratureSpec;
using varfrac::SingularEnd;
using varfrac::SingularIntegrand;
using varfrac::integrate_singular;

namespace {

// Reference values: tests/oracles/compute_oracles.py (mpmath, 30 digits).
constexpr double kRawBivariate = 0.88337469713267253;
constexpr double kNormalizedBivariate = 0.63504565542961647;

SingularIntegrand bivariate(bool normalized) {
  SingularIntegrand in;
  in.exponent = [](double, double tau) { return 0.5 + 0.2 * tau; };
  in.exponent_lo = 0.5;
  in.exponent_hi = 0.7;
  in.density = [](double tau) { return tau; };
  in.singular_end = SingularEnd::upper;
  in.gamma_normalized = normalized;
  return in;
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto gl = varfrac::gauss_legendre(8);
  for (int p = 0; p <= 15; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) acc += gl.weights[k] * std::pow(gl.nodes[k], p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    EXPECT_NEAR(acc, exact, 1e-14) << "degree " << p;
  }
}

TEST(IntegrateSingular, ZeroDensity) {
  SingularIntegrand in = bivariate(true);
  in.density = [](double) { return 0.0; };
  EXPECT_EQ(integrate_singular(in, 0.0, 1.0, {}), 0.0);
}

TEST(IntegrateSingular, ConstantOrderClosedForm) {
  SingularIntegrand in;
  in.exponent = [](double, double) { return 0.5; };
  in.exponent_lo = in.exponent_hi = 0.5;
  in.density = [](double) { return 1.0; };
  EXPECT_NEAR(integrate_singular(in, 0.0, 1.0, {}), 1.0 / varfrac::gamma(1.5), 1e-10);
  in.singular_end = SingularEnd::lower;
  EXPECT_NEAR(integrate_singular(in, 0.0, 1.0, {}), 1.0 / varfrac::gamma(1.5), 1e-10);
}

TEST(IntegrateSingular, BivariateOracle) {
  EXPECT_NEAR(integrate_singular(bivariate(false), 0.0, 1.0, {}), kRawBivariate, 1e-10);
  EXPECT_NEAR(integrate_singular(bivariate(true), 0.0, 1.0, {}), kNormalizedBivariate, 1e-10);
}

TEST(IntegrateSingular, StrongSingularity) {
  SingularIntegrand in;
  in.exponent = [](double, double) { return 0.1; };
  in.exponent_lo = in.exponent_hi = 0.1;
  in.density = [](double tau) { return tau * tau; };
  in.gamma_normalized = false;
  // int_0^1 (1 - tau)^(-0.9) tau^2 dtau = B(3, 0.1)
  const double exact = varfrac::gamma(3.0) * varfrac::gamma(0.1) / varfrac::gamma(3.1);
  EXPECT_NEAR(integrate_singular(in, 0.0, 1.0, {}), exact, 1e-9);
}

TEST(IntegrateSingular, RefinementStable) {
  QuadratureSpec coarse;
  QuadratureSpec fine;
  fine.panels = 64;
  const double a = integrate_singular(bivariate(true), 0.0, 1.0, coarse);
  const double b = integrate_singular(bivariate(true), 0.0, 1.0, fine);
  EXPECT_NEAR(a, b, 2e-10);
}

TEST(IntegrateSingular, Errors) {
  EXPECT_THROW(integrate_singular(bivariate(true), 1.0, 1.0, {}), varfrac::DomainError);
  EXPECT_THROW(integrate_singular(bivariate(true), 1.0, 0.5, {}), varfrac::DomainError);
  SingularIntegrand bad = bivariate(true);
  bad.exponent_lo = 0.0;
  EXPECT_THROW(integrate_singular(bad, 0.0, 1.0, {}), varfrac::DomainError);
  QuadratureSpec spec;
  spec.panels = 2;
  EXPECT_THROW(integrate_singular(bivariate(true), 0.0, 1.0, spec), varfrac::DomainError);
}

TEST(IntegrateSingular, NonConvergenceCarriesEstimates) {
  QuadratureSpec spec;
  spec.tolerance = 1e-300;
  spec.max_refinements = 1;
  try {
    integrate_singular(bivariate(true), 0.0, 1.0, spec);
    FAIL() << "expected ConvergenceError";
  } catch (const varfrac::ConvergenceError& e) {
    EXPECT_NEAR(e.previous(), kNormalizedBivariate, 1e-6);
    EXPECT_NEAR(e.current(), kNormalizedBivariate, 1e-6);
  }
}

TEST(EffectiveGrading, FollowsLowerExponent) {
  QuadratureSpec spec;
  EXPECT_DOUBLE_EQ(varfrac::effective_grading(spec, 0.5), 16.0);
  EXPECT_DOUBLE_EQ(varfrac::effective_grading(spec, 1.0), 8.0);
  EXPECT_DOUBLE_EQ(varfrac::effective_grading(spec, 0.05), 40.0);
  spec.grading = 50.0;
  EXPECT_DOUBLE_EQ(varfrac::effective_grading(spec, 0.5), 50.0);
}

TEST(Simpson, ExactForCubicsAnyCellCount) {
  for (std::size_t cells : {2u, 3u, 4u, 5u, 10u, 11u}) {
    const double h = 2.0 / static_cast<double>(cells);
    std::vector<double> v;
    for (std::size_t i = 0; i <= cells; ++i) {
      const double t = -1.0 + static_cast<double>(i) * h;
      v.push_back(t * t * t + 2 * t * t - 1);
    }
    EXPECT_NEAR(varfrac::simpson(v, h), 4.0 / 3.0 - 2.0, 1e-13) << cells << " cells";
  }
}

TEST(Simpson, SingleCellIsTrapezoid) {
  const std::vector<double> v = {1.0, 3.0};
  EXPECT_DOUBLE_EQ(varfrac::simpson(v, 0.5), 1.0);
}
