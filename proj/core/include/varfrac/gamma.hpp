#pragma once

namespace varfrac {

/// Gamma function on the positive reals.
///
/// Lanczos approximation (g = 7, 9 terms) for x >= 1/2; the reflection
/// formula covers (0, 1/2) so that Gamma(x) ~ 1/x is never evaluated through
/// the series near the pole. Relative error stays below 1e-13 on (0, 50].
/// Throws DomainError for x <= 0 or non-finite x.
double gamma(double x);

/// Rational bounds on Gamma(x + 1) for x in [0, 1]:
///   (x^2 + 1) / (x + 1) <= Gamma(x + 1) <= (x^2 + 2) / (x + 2).
struct GammaBounds {
  double x;
  double lower;
  double upper;

  bool contains(double value, double slack = 0.0) const noexcept {
    return value >= lower - slack && value <= upper + slack;
  }
};

/// Throws DomainError for x outside [0, 1].
GammaBounds gamma_bounds(double x);

}  // namespace varfrac
