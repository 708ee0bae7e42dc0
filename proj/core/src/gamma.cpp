#include "varfrac/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "varfrac/errors.hpp"

namespace varfrac {
namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos(double x) {
  // Gamma(x) for x >= 1/2, written as Gamma(z + 1) with z = x - 1.
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    series += kLanczos[k] / (z + static_cast<double>(k));
  }
  const double base = z + kLanczosG + 0.5;
  // Split the power so base^(z+0.5) does not overflow before exp(-base) scales it.
  const double half = std::pow(base, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-base)) * series;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos(1.0 - x));
  }
  return lanczos(x);
}

GammaBounds gamma_bounds(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("gamma_bounds: x must lie in [0, 1], got " + std::to_string(x));
  }
  return {x, (x * x + 1.0) / (x + 1.0), (x * x + 2.0) / (x + 2.0)};
}

}  // namespace varfrac
