#include "varfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "varfrac/errors.hpp"
#include "varfrac/gamma.hpp"

namespace varfrac {
namespace {

constexpr int kGaussOrder = 8;
constexpr double kGradingNumerator = 8.0;
constexpr double kMaxGrading = 40.0;

const GaussLegendre& gauss8() {
  static const GaussLegendre rule = gauss_legendre(kGaussOrder);
  return rule;
}

std::vector<double> graded_distances(double length, int panels, double grading,
                                     std::span<const double> extra) {
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(panels) + extra.size() + 1);
  u.push_back(0.0);
  for (int k = 1; k < panels; ++k) {
    const double s = static_cast<double>(k) / panels;
    const double d = length * std::pow(s, grading);
    if (d > 0.0) u.push_back(d);
  }
  for (double d : extra) {
    if (d > 0.0 && d < length) u.push_back(d);
  }
  u.push_back(length);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (panels < 4) throw DomainError("quadrature: panels must be >= 4, got " + std::to_string(panels));
  if (!(grading >= 1.0)) throw DomainError("quadrature: grading must be >= 1, got " + std::to_string(grading));
  if (!(tolerance > 0.0)) throw DomainError("quadrature: tolerance must be positive");
  if (max_refinements < 1) throw DomainError("quadrature: max_refinements must be >= 1");
}

double effective_grading(const QuadratureSpec& spec, double exponent_lo) noexcept {
  const double q = std::max(spec.grading, kGradingNumerator / exponent_lo);
  return std::min(q, std::max(kMaxGrading, spec.grading));
}

GaussLegendre gauss_legendre(int n) {
  GaussLegendre r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.nodes[static_cast<std::size_t>(i)] = -z;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

double QuadratureRule::apply(const std::function<double(double)>& density) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * density(nodes[k]);
  return acc;
}

QuadratureRule singular_rule(const std::function<double(double, double)>& exponent,
                             bool gamma_normalized, double lower, double upper, SingularEnd end, int panels,
                             double grading, std::span<const double> breakpoints) {
  const double length = upper - lower;
  const double s = end == SingularEnd::upper ? upper : lower;

  std::vector<double> extra;
  extra.reserve(breakpoints.size());
  for (double bp : breakpoints) {
    extra.push_back(end == SingularEnd::upper ? upper - bp : bp - lower);
  }
  const std::vector<double> u = graded_distances(length, panels, grading, extra);

  const GaussLegendre& gl = gauss8();
  QuadratureRule rule;
  rule.nodes.reserve((u.size() - 1) * gl.nodes.size());
  rule.weights.reserve((u.size() - 1) * gl.nodes.size());
  for (std::size_t p = 0; p + 1 < u.size(); ++p) {
    const double mid = 0.5 * (u[p] + u[p + 1]);
    const double half = 0.5 * (u[p + 1] - u[p]);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double dist = mid + half * gl.nodes[k];
      const double tau = end == SingularEnd::upper ? upper - dist : lower + dist;
      const double mu = exponent(s, tau);
      double kernel = std::pow(dist, mu - 1.0);
      if (gamma_normalized) kernel /= gamma(mu);
      rule.nodes.push_back(tau);
      rule.weights.push_back(half * gl.weights[k] * kernel);
    }
  }
  return rule;
}

double integrate_singular(const SingularIntegrand& integrand, double lower, double upper,
                          const QuadratureSpec& spec) {
  spec.validate();
  if (!(lower < upper)) {
    throw DomainError("integrate_singular: need lower < upper, got [" + std::to_string(lower) + ", " +
                      std::to_string(upper) + "]");
  }
  if (!(integrand.exponent_lo > 0.0 && integrand.exponent_lo <= integrand.exponent_hi &&
        integrand.exponent_hi <= 1.0)) {
    throw DomainError("integrate_singular: exponent bounds must satisfy 0 < lo <= hi <= 1");
  }
  const double q = effective_grading(spec, integrand.exponent_lo);
  int panels = spec.panels;
  auto estimate = [&](int p) {
    return singular_rule(integrand.exponent, integrand.gamma_normalized, lower, upper,
                         integrand.singular_end, p, q)
        .apply(integrand.density);
  };
  double previous = estimate(panels);
  double current = previous;
  for (int r = 0; r < spec.max_refinements; ++r) {
    panels *= 2;
    current = estimate(panels);
    if (std::abs(current - previous) <= spec.tolerance) return current;
    previous = current;
  }
  throw ConvergenceError("integrate_singular: tolerance " + std::to_string(spec.tolerance) + " not met after " +
                             std::to_string(spec.max_refinements) + " refinements",
                         previous, current);
}

GridFunction differentiate_grid(const GridFunction& values) {
  return GridFunction(values.mesh(), differentiate_samples(values.values(), values.mesh().step()));
}

double simpson(std::span<const double> v, double h) {
  const std::size_t n = v.size() == 0 ? 0 : v.size() - 1;
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (v[0] + v[1]);
  std::size_t even_cells = n % 2 == 0 ? n : n - 3;
  double acc = 0.0;
  if (even_cells > 0) {
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < even_cells; ++i) (i % 2 ? odd : even) += v[i];
    acc = h / 3.0 * (v[0] + 4.0 * odd + 2.0 * even + v[even_cells]);
  }
  if (even_cells != n) {
    const std::size_t i = even_cells;
    acc += 3.0 * h / 8.0 * (v[i] + 3.0 * v[i + 1] + 3.0 * v[i + 2] + v[i + 3]);
  }
  return acc;
}

}  // namespace varfrac
