#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "varfrac/grid_function.hpp"

namespace varfrac {

/// Policy for the weakly singular quadrature.
struct QuadratureSpec {
  int panels = 16;           ///< base number of graded panels
  double grading = 1.0;      ///< minimum grading exponent toward the singular end
  double tolerance = 1e-10;  ///< target on the doubling-difference error estimate
  int max_refinements = 10;  ///< maximum number of panel doublings

  /// Throws DomainError unless panels >= 4, grading >= 1, tolerance > 0 and
  /// max_refinements >= 1.
  void validate() const;
};

/// Which limit of integration carries the kernel singularity.
enum class SingularEnd {
  upper,  ///< kernel (upper - tau)^(mu - 1): left operators
  lower,  ///< kernel (tau - lower)^(mu - 1): right operators
};

/// Integrand of the form K(s, tau) h(tau) with
///   K(s, tau) = |s - tau|^(mu(s, tau) - 1) [/ Gamma(mu(s, tau))]
/// where s is the singular limit. The exponent is called as exponent(s, tau);
/// operators that read their order with swapped arguments wrap it accordingly.
struct SingularIntegrand {
  std::function<double(double, double)> exponent;
  double exponent_lo = 0.0;  ///< certified lower bound of the exponent, in (0, 1]
  double exponent_hi = 1.0;  ///< certified upper bound of the exponent, in (0, 1]
  std::function<double(double)> density;
  SingularEnd singular_end = SingularEnd::upper;
  bool gamma_normalized = true;
};

/// Grading exponent actually used for a given exponent lower bound: the
/// larger of spec.grading and 8 / exponent_lo, capped at 40.
double effective_grading(const QuadratureSpec& spec, double exponent_lo) noexcept;

/// Nodes of a kernel-weighted rule for one integral: the integral of
/// K * h is approximated by sum_k weights[k] * h(nodes[k]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double apply(const std::function<double(double)>& density) const;
};

/// Builds the kernel-weighted rule for the graded mesh with `panels` panels,
/// eight Gauss-Legendre nodes per sub-panel. Sub-panels are the union of the
/// graded points and any `breakpoints` inside (lower, upper), so a density
/// that is only piecewise smooth on a data mesh is integrated cell by cell.
/// The kernel is evaluated from the distance to the singular limit and never
/// at distance zero.
QuadratureRule singular_rule(const std::function<double(double, double)>& exponent,
                             bool gamma_normalized, double lower, double upper, SingularEnd end, int panels,
                             double grading, std::span<const double> breakpoints = {});

/// Integral of the singular integrand over [lower, upper] to spec.tolerance,
/// judged by the difference between successive panel doublings.
/// Throws DomainError if lower >= upper or the exponent bounds are not in
/// (0, 1], and ConvergenceError (carrying the last two estimates) if the
/// tolerance is not met within spec.max_refinements doublings.
double integrate_singular(const SingularIntegrand& integrand, double lower, double upper,
                          const QuadratureSpec& spec);

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// Derivative of a sampled function: fourth-order central differences in the
/// interior and fourth-order one-sided stencils at the ends. Exact for
/// polynomials of degree <= 4. Throws DomainError for fewer than 5 points.
GridFunction differentiate_grid(const GridFunction& values);

/// Composite Simpson rule over nodes [first, last] of a uniform mesh with
/// spacing h. An odd number of cells ends with a Simpson 3/8 panel. Requires
/// at least two cells (three nodes); a single cell uses the trapezoid rule.
double simpson(std::span<const double> values, double h);

}  // namespace varfrac
