#pragma once

#include <string>
#include <string_view>

#include "varfrac/expr.hpp"

namespace varfrac {

enum class OrderKind { constant, t_only, bivariate };

std::string_view order_kind_name(OrderKind kind) noexcept;

/// A variable fractional order alpha(t, tau) with a certified range
/// [range_lo, range_hi] inside (0, 1) on the square [a, b]^2, and the margin
/// integer n that the boundedness and variational hypotheses are stated in.
///
/// Immutable after construction.
class OrderFunction {
 public:
  /// The expression may use `t` and `tau` only. Construction spot-checks the
  /// range on a 64 x 64 grid over [a, b]^2 and throws PreconditionError if a
  /// sample leaves [range_lo, range_hi] or fails to evaluate, or if
  /// 0 < range_lo <= range_hi < 1 and margin_n >= 2 do not hold.
  OrderFunction(Expression expr, double range_lo, double range_hi, int margin_n, double a, double b);

  static OrderFunction parse(std::string_view source, double range_lo, double range_hi, int margin_n, double a,
                             double b);
  static OrderFunction constant(double value, int margin_n, double a, double b);

  double operator()(double t, double tau) const;

  OrderKind kind() const noexcept { return kind_; }
  const Expression& expression() const noexcept { return expr_; }
  double range_lo() const noexcept { return lo_; }
  double range_hi() const noexcept { return hi_; }
  int margin_n() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// Hypothesis for orders of fractional integrals: 1/n < order < 1.
  void require_integral_order(std::string_view role) const;
  /// Hypothesis for Caputo orders in the variational problem: 0 < order < 1 - 1/n.
  void require_derivative_order(std::string_view role) const;

 private:
  Expression expr_;
  OrderKind kind_;
  double lo_;
  double hi_;
  int n_;
  double a_;
  double b_;
  double constant_value_ = 0.0;
};

}  // namespace varfrac
