#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "varfrac/grid_function.hpp"
#include "varfrac/order_function.hpp"
#include "varfrac/quadrature.hpp"

namespace varfrac {

enum class Side { left, right };

/// The six variable-order operators. Left kernels read the order as
/// alpha(t, tau); right kernels read it as alpha(tau, t).
enum class OperatorKind {
  left_integral,
  right_integral,
  left_rl_derivative,
  right_rl_derivative,
  left_caputo,
  right_caputo,
};

std::string_view operator_name(OperatorKind kind) noexcept;
std::optional<OperatorKind> operator_from_name(std::string_view name) noexcept;
inline constexpr OperatorKind kAllOperators[] = {
    OperatorKind::left_integral,       OperatorKind::right_integral, OperatorKind::left_rl_derivative,
    OperatorKind::right_rl_derivative, OperatorKind::left_caputo,    OperatorKind::right_caputo};

/// Whether a kernel uses the order itself or its complement 1 - order
/// (derivatives integrate with order 1 - alpha).
enum class OrderUse { direct, complement };

/// Kernel exponent as a function of (singular point, integration variable),
/// with the argument convention of the given side already applied.
std::function<double(double, double)> kernel_exponent(const OrderFunction& order, Side side, OrderUse use);

/// Dense square matrix acting on nodal samples.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }

  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Weights w such that the fractional integral at t of the Hermite
/// interpolant of samples f equals sum_j w_j f_j. Panels are doubled until
/// the l1 change of the weights is at most spec.tolerance, so the error
/// estimate holds uniformly for samples bounded by 1. Returns zeros at the
/// degenerate end (t = a on the left, t = b on the right).
/// Throws DomainError for t outside the mesh or an order whose certified
/// domain does not cover it; ConvergenceError if refinement stalls.
std::vector<double> rl_integral_row(const Mesh& mesh, const OrderFunction& order, Side side, OrderUse use, double t,
                                    const QuadratureSpec& spec);

/// Row i is rl_integral_row at node i.
OperatorMatrix rl_integral_matrix(const Mesh& mesh, const OrderFunction& order, Side side, OrderUse use,
                                  const QuadratureSpec& spec);

/// Nodal matrix of any of the six operators. RL derivatives are the
/// derivative stencils applied after the integral of order 1 - alpha; Caputo
/// derivatives are the integral of order 1 - alpha applied after the
/// derivative stencils. The right variants carry a minus sign.
OperatorMatrix operator_matrix(OperatorKind kind, const Mesh& mesh, const OrderFunction& order,
                               const QuadratureSpec& spec);

/// Inclusive node range on which an operator's nodal values are trusted. RL
/// derivatives exclude two nodes at the end where the differentiated integral
/// is singular; every other operator is valid on the whole mesh.
std::pair<std::size_t, std::size_t> valid_nodes(OperatorKind kind, const Mesh& mesh) noexcept;

double left_rl_integral(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec);
double right_rl_integral(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec);

/// d/dt of the left integral of order 1 - alpha. The integral is evaluated on
/// the whole mesh and differentiated with the grid stencils; t must lie in
/// [t_2, b], otherwise DomainError names the valid sub-interval.
double left_rl_derivative(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec);
/// -d/dt of the right integral of order 1 - alpha; t must lie in [a, t_{N-2}].
double right_rl_derivative(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec);

/// Left integral of order 1 - alpha applied to the differentiated samples.
double left_caputo(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec);
/// Minus the right integral of order 1 - alpha applied to the differentiated samples.
double right_caputo(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec);

double apply_operator(OperatorKind kind, const GridFunction& f, const OrderFunction& order, double t,
                      const QuadratureSpec& spec);

/// Closed form of the left integral of (t - a)^gamma for an order that
/// depends on t only:
///   Gamma(gamma + 1) (t - a)^(gamma + beta(t)) / Gamma(gamma + beta(t) + 1).
/// Throws DomainError if gamma_exp <= -1 or t < a, PreconditionError if the
/// order depends on tau.
double power_identity_reference(double gamma_exp, const OrderFunction& order, double a, double t);

/// Checks that left kernels read alpha(t, tau) and right kernels alpha(tau, t)
/// using an asymmetric order with closed-form values. Runs automatically
/// (once) before the first operator is assembled; a failure raises
/// std::logic_error there.
bool order_convention_self_test();

}  // namespace varfrac
