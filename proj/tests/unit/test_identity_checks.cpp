#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "varfrac/errors.hpp"
#include "varfrac/identity_checks.hpp"

using namespace varfrac;

namespace {

constexpr double kInvGamma25Times = 0.75225277806367505;  // (2/3) / Gamma(3/2)
const QuadratureSpec kSpec;
// The outer Simpson rule sees a sqrt(t) integrand here; its error at 401 points is about 1.1e-5.
constexpr double kOuterSimpson = 3e-5;

}  // namespace

TEST(NormRatio, ConstantFunction) {
  const Mesh m(0.0, 1.0, 401);
  const auto order = OrderFunction::constant(0.5, 3, 0.0, 1.0);
  const auto one = GridFunction::sample(m, [](double) { return 1.0; });
  EXPECT_NEAR(l1_norm_ratio(one, order, kSpec), kInvGamma25Times, kOuterSimpson);
}

TEST(NormRatio, ZeroFunctionIsDomainError) {
  const Mesh m(0.0, 1.0, 51);
  const auto order = OrderFunction::constant(0.5, 3, 0.0, 1.0);
  const auto zero = GridFunction::sample(m, [](double) { return 0.0; });
  EXPECT_THROW(l1_norm_ratio(zero, order, kSpec), DomainError);
}

TEST(NormRatio, TrialsAreBoundedAndReproducible) {
  const auto order = OrderFunction::parse("(t + 1) / 4", 0.25, 0.5, 5, 0.0, 1.0);
  const NormRatioResult r1 = norm_ratio_trials(order, 40, 7, kSpec);
  const NormRatioResult r2 = norm_ratio_trials(order, 40, 7, kSpec);
  ASSERT_EQ(r1.ratios.size(), 40u);
  EXPECT_EQ(r1.ratios, r2.ratios);
  EXPECT_EQ(r1.violations, 0u);
  EXPECT_DOUBLE_EQ(r1.bound, 6.0);
  EXPECT_LT(r1.max_ratio, r1.bound);
  EXPECT_GT(r1.max_ratio, 0.0);
  const NormRatioResult r3 = norm_ratio_trials(order, 40, 8, kSpec);
  EXPECT_NE(r1.ratios, r3.ratios);
  EXPECT_EQ(estimate_norm_ratio(order, 40, 7, kSpec), r1.max_ratio);
}

TEST(NormRatio, BoundHoldsOverSeeds) {
  const auto order = OrderFunction::parse("0.55 + 0.2*sin(t)^2 + 0.2*cos(tau)^2", 0.55, 0.95, 2, 0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const NormRatioResult r = norm_ratio_trials(order, 30, seed, kSpec);
    EXPECT_EQ(r.violations, 0u);
    for (double x : r.ratios) EXPECT_LT(x, r.bound);
  }
}

TEST(NormRatio, OrderMustBeAnIntegralOrder) {
  const auto order = OrderFunction::constant(0.3, 2, 0.0, 1.0);
  EXPECT_THROW(norm_ratio_trials(order, 5, 0, kSpec), PreconditionError);
}

TEST(IbpIntegrals, ConstantFunctions) {
  const Mesh m(0.0, 1.0, 401);
  const auto order = OrderFunction::constant(0.5, 3, 0.0, 1.0);
  const auto one = GridFunction::sample(m, [](double) { return 1.0; });
  const IdentityReport r = verify_ibp_integrals(one, one, order, kSpec);
  EXPECT_NEAR(r.lhs, kInvGamma25Times, kOuterSimpson);
  EXPECT_NEAR(r.rhs, kInvGamma25Times, kOuterSimpson);
  EXPECT_LE(r.abs_gap, 1e-12);
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.tolerance, default_ibp_tolerance(kSpec));
}

TEST(IbpIntegrals, ZeroFunction) {
  const Mesh m(0.0, 1.0, 101);
  const auto order = OrderFunction::parse("0.4 + 0.2*tau*t", 0.4, 0.6, 3, 0.0, 1.0);
  const auto zero = GridFunction::sample(m, [](double) { return 0.0; });
  const auto g = GridFunction::sample(m, [](double t) { return std::cos(t); });
  const IdentityReport r = verify_ibp_integrals(zero, g, order, kSpec);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(IbpIntegrals, BivariateOrder) {
  const Mesh m(0.0, 1.0, 401);
  const auto order = OrderFunction::parse("0.6 + 0.3*t - 0.2*tau", 0.4, 0.9, 3, 0.0, 1.0);
  const auto f = GridFunction::sample(m, [](double t) { return t; });
  const auto g = GridFunction::sample(m, [](double t) { return std::cos(t); });
  const IdentityReport r = verify_ibp_integrals(f, g, order, kSpec);
  EXPECT_TRUE(r.passed) << r.abs_gap;
  EXPECT_LE(r.abs_gap, 1e-4);
}

TEST(IbpCaputo, ConstantFunctionHasZeroLeftSide) {
  const Mesh m(0.25, 1.25, 401);
  const auto order = OrderFunction::constant(0.3, 3, 0.25, 1.25);
  const auto f = GridFunction::sample(m, [](double) { return 2.0; });
  const auto g = GridFunction::sample(m, [](double t) { return t * t; });
  const IdentityReport r = verify_ibp_caputo(f, g, order, kSpec);
  EXPECT_LE(std::abs(r.lhs), 1e-9);
  EXPECT_TRUE(r.passed) << r.abs_gap;
}

TEST(IbpCaputo, LinearAgainstOne) {
  const Mesh m(0.0, 1.0, 401);
  const auto order = OrderFunction::constant(0.5, 3, 0.0, 1.0);
  const auto f = GridFunction::sample(m, [](double t) { return t; });
  const auto one = GridFunction::sample(m, [](double) { return 1.0; });
  const IdentityReport r = verify_ibp_caputo(f, one, order, kSpec);
  EXPECT_NEAR(r.lhs, kInvGamma25Times, kOuterSimpson);
  EXPECT_TRUE(r.passed) << r.abs_gap;
  EXPECT_EQ(r.metadata.at("boundary_layer_cells"), 8);
}

TEST(IbpCaputo, VariableOrder) {
  const Mesh m(0.25, 1.25, 401);
  const auto order = OrderFunction::parse("0.3 + 0.1*t", 0.325, 0.425, 3, 0.25, 1.25);
  const auto f = GridFunction::sample(m, [](double t) { return t * t; });
  const auto g = GridFunction::sample(m, [](double t) { return 1.0 - t; });
  const IdentityReport r = verify_ibp_caputo(f, g, order, kSpec);
  EXPECT_TRUE(r.passed) << r.abs_gap;
}

TEST(IbpFamily, AllPairsPass) {
  for (bool caputo : {false, true}) {
    const auto reports = run_ibp_family(caputo, kSpec);
    EXPECT_EQ(reports.size(), 3u * 5u * 5u);
    for (const auto& r : reports) {
      EXPECT_TRUE(r.passed) << r.metadata.dump() << " gap " << r.abs_gap;
    }
  }
}

TEST(IdentityReport, JsonFields) {
  const IdentityReport r = make_report(1.0, 1.5, 0.25, {{"check", "x"}});
  EXPECT_DOUBLE_EQ(r.abs_gap, 0.5);
  EXPECT_FALSE(r.passed);
  const nlohmann::json j = r;
  std::set<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.insert(k);
  EXPECT_EQ(keys, (std::set<std::string>{"lhs", "rhs", "abs_gap", "tolerance", "passed", "metadata"}));
  EXPECT_EQ(j.at("metadata").at("check"), "x");
}

TEST(IdentityReport, Deterministic) {
  const Mesh m(0.0, 1.0, 201);
  const auto order = OrderFunction::parse("0.4 + 0.2*tau*t", 0.4, 0.6, 3, 0.0, 1.0);
  const auto f = GridFunction::sample(m, [](double t) { return std::sin(t); });
  const auto g = GridFunction::sample(m, [](double t) { return t * t; });
  const nlohmann::json a = verify_ibp_integrals(f, g, order, kSpec);
  const nlohmann::json b = verify_ibp_integrals(f, g, order, kSpec);
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(IbpHarness, Preconditions) {
  const Mesh m(0.0, 1.0, 101);
  EXPECT_THROW(IbpHarness(m, OrderFunction::constant(0.3, 3, 0.0, 1.0), kSpec, false), PreconditionError);
  EXPECT_THROW(IbpHarness(m, OrderFunction::constant(0.7, 3, 0.0, 1.0), kSpec, true), PreconditionError);
  EXPECT_THROW(IbpHarness(Mesh(0.0, 2.0, 101), OrderFunction::constant(0.5, 3, 0.0, 1.0), kSpec, false), DomainError);
  EXPECT_THROW(IbpHarness(Mesh(0.0, 1.0, 11), OrderFunction::constant(0.5, 3, 0.0, 1.0), kSpec, true), DomainError);

  const IbpHarness integrals(m, OrderFunction::constant(0.5, 3, 0.0, 1.0), kSpec, false);
  const auto one = GridFunction::sample(m, [](double) { return 1.0; });
  EXPECT_THROW(integrals.caputo(one, one), PreconditionError);
  const auto other = GridFunction::sample(Mesh(0.0, 1.0, 51), [](double) { return 1.0; });
  EXPECT_THROW(integrals.integrals(one, other), DomainError);
}

TEST(IbpHarness, ExplicitTolerance) {
  const Mesh m(0.0, 1.0, 201);
  const auto one = GridFunction::sample(m, [](double) { return 1.0; });
  const IbpHarness h(m, OrderFunction::constant(0.5, 3, 0.0, 1.0), kSpec, false);
  EXPECT_DOUBLE_EQ(h.integrals(one, one, 0.0).tolerance, 0.0);
  EXPECT_DOUBLE_EQ(h.integrals(one, one, 1e-3).tolerance, 1e-3);
}
