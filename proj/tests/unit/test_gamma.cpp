#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "varfrac/errors.hpp"
#include "varfrac/gamma.hpp"

using varfrac::gamma_bounds;

TEST(Gamma, KnownValues) {
  EXPECT_NEAR(varfrac::gamma(0.5), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(varfrac::gamma(1.5), 0.886226925452758, 1e-14);
  EXPECT_NEAR(varfrac::gamma(2.5), 1.329340388179137, 1e-14);
  EXPECT_DOUBLE_EQ(varfrac::gamma(1.0), 1.0);
  EXPECT_NEAR(varfrac::gamma(5.0), 24.0, 1e-12);
}

TEST(Gamma, SmallArgumentUsesReflection) {
  EXPECT_NEAR(varfrac::gamma(1e-3) * 1e-3, std::tgamma(1.001), 1e-14);
  EXPECT_NEAR(varfrac::gamma(0.1), 9.513507698668732, 1e-12);
}

TEST(Gamma, AgreesWithStdTgamma) {
  for (double x = 0.01; x < 30.0; x += 0.0737) {
    const double ref = std::tgamma(x);
    EXPECT_NEAR(varfrac::gamma(x), ref, 1e-13 * ref) << "x = " << x;
  }
}

TEST(Gamma, RecurrenceHolds) {
  for (double x = 0.05; x < 10.0; x += 0.11) {
    EXPECT_NEAR(varfrac::gamma(x + 1.0), x * varfrac::gamma(x), 1e-13 * varfrac::gamma(x + 1.0)) << "x = " << x;
  }
}

TEST(Gamma, RejectsNonPositiveAndNonFinite) {
  EXPECT_THROW(varfrac::gamma(0.0), varfrac::DomainError);
  EXPECT_THROW(varfrac::gamma(-1.5), varfrac::DomainError);
  EXPECT_THROW(varfrac::gamma(std::numeric_limits<double>::quiet_NaN()), varfrac::DomainError);
  EXPECT_THROW(varfrac::gamma(std::numeric_limits<double>::infinity()), varfrac::DomainError);
}

TEST(GammaBounds, EndpointsAreTight) {
  const auto at0 = gamma_bounds(0.0);
  EXPECT_DOUBLE_EQ(at0.lower, 1.0);
  EXPECT_DOUBLE_EQ(at0.upper, 1.0);
  const auto at1 = gamma_bounds(1.0);
  EXPECT_DOUBLE_EQ(at1.lower, 1.0);
  EXPECT_DOUBLE_EQ(at1.upper, 1.0);
}

TEST(GammaBounds, MidpointValues) {
  const auto b = gamma_bounds(0.5);
  EXPECT_NEAR(b.lower, 0.8333333333333334, 1e-15);
  EXPECT_NEAR(b.upper, 0.9, 1e-15);
  EXPECT_TRUE(b.contains(varfrac::gamma(1.5)));
}

TEST(GammaBounds, HoldOnDenseGrid) {
  for (int k = 0; k < 1000; ++k) {
    const double x = k / 999.0;
    const auto b = gamma_bounds(x);
    EXPECT_LE(b.lower, b.upper);
    EXPECT_TRUE(b.contains(varfrac::gamma(x + 1.0), 1e-12)) << "x = " << x;
  }
}

TEST(GammaBounds, RejectsOutsideUnitInterval) {
  EXPECT_THROW(gamma_bounds(-0.01), varfrac::DomainError);
  EXPECT_THROW(gamma_bounds(1.01), varfrac::DomainError);
}
