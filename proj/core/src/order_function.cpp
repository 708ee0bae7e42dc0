#include "varfrac/order_function.hpp"

#include <cmath>
#include <sstream>

#include "varfrac/errors.hpp"

namespace varfrac {
namespace {

constexpr int kSpotCheckGrid = 64;
constexpr double kRangeSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string_view order_kind_name(OrderKind kind) noexcept {
  switch (kind) {
    case OrderKind::constant: return "constant";
    case OrderKind::t_only: return "t_only";
    case OrderKind::bivariate: return "bivariate";
  }
  return "?";
}

OrderFunction::OrderFunction(Expression expr, double range_lo, double range_hi, int margin_n, double a, double b)
    : expr_(std::move(expr)), lo_(range_lo), hi_(range_hi), n_(margin_n), a_(a), b_(b) {
  VariableSet allowed;
  allowed.insert(Variable::t);
  allowed.insert(Variable::tau);
  if (!expr_.free_variables().subset_of(allowed)) {
    throw PreconditionError("order '" + expr_.to_string() + "' may depend on t and tau only");
  }
  if (!(lo_ > 0.0 && lo_ <= hi_ && hi_ < 1.0)) {
    throw PreconditionError("order range must satisfy 0 < lo <= hi < 1, got [" + fmt(lo_) + ", " + fmt(hi_) + "]");
  }
  if (n_ < 2) throw PreconditionError("margin n must be >= 2, got " + std::to_string(n_));
  if (!(std::isfinite(a_) && std::isfinite(b_) && a_ < b_)) {
    throw PreconditionError("order domain needs finite a < b");
  }

  const VariableSet fv = expr_.free_variables();
  if (fv.empty()) {
    kind_ = OrderKind::constant;
  } else if (!fv.contains(Variable::tau)) {
    kind_ = OrderKind::t_only;
  } else {
    kind_ = OrderKind::bivariate;
  }
  if (kind_ == OrderKind::constant) constant_value_ = expr_.evaluate(Bindings{});

  for (int i = 0; i < kSpotCheckGrid; ++i) {
    const double t = a_ + (b_ - a_) * i / (kSpotCheckGrid - 1);
    for (int j = 0; j < kSpotCheckGrid; ++j) {
      const double tau = a_ + (b_ - a_) * j / (kSpotCheckGrid - 1);
      double v = 0.0;
      try {
        v = (*this)(t, tau);
      } catch (const EvaluationError& e) {
        throw PreconditionError("order '" + expr_.to_string() + "' failed to evaluate at (t=" + fmt(t) +
                                ", tau=" + fmt(tau) + "): " + e.what());
      }
      if (!(v >= lo_ - kRangeSlack && v <= hi_ + kRangeSlack)) {
        throw PreconditionError("order '" + expr_.to_string() + "' evaluates to " + fmt(v) + " at (t=" + fmt(t) +
                                ", tau=" + fmt(tau) + "), outside its declared range [" + fmt(lo_) + ", " +
                                fmt(hi_) + "]");
      }
    }
  }
}

OrderFunction OrderFunction::parse(std::string_view source, double range_lo, double range_hi, int margin_n, double a,
                                   double b) {
  return OrderFunction(Expression::parse(source), range_lo, range_hi, margin_n, a, b);
}

OrderFunction OrderFunction::constant(double value, int margin_n, double a, double b) {
  return OrderFunction(Expression::constant(value), value, value, margin_n, a, b);
}

double OrderFunction::operator()(double t, double tau) const {
  if (kind_ == OrderKind::constant) return constant_value_;
  Bindings env;
  env.set(Variable::t, t).set(Variable::tau, tau);
  return expr_.evaluate(env);
}

void OrderFunction::require_integral_order(std::string_view role) const {
  if (!(lo_ > 1.0 / n_)) {
    throw PreconditionError(std::string(role) + " order '" + expr_.to_string() + "' violates 1/n < order (n=" +
                            std::to_string(n_) + ", declared lower bound " + fmt(lo_) + ")");
  }
}

void OrderFunction::require_derivative_order(std::string_view role) const {
  if (!(hi_ < 1.0 - 1.0 / n_)) {
    throw PreconditionError(std::string(role) + " order '" + expr_.to_string() + "' violates order < 1 - 1/n (n=" +
                            std::to_string(n_) + ", declared upper bound " + fmt(hi_) + ")");
  }
}

}  // namespace varfrac
