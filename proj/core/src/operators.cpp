#include "varfrac/operators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "varfrac/errors.hpp"
#include "varfrac/gamma.hpp"

namespace varfrac {
namespace {

constexpr std::pair<OperatorKind, std::string_view> kOperatorNames[] = {
    {OperatorKind::left_integral, "left_integral"},
    {OperatorKind::right_integral, "right_integral"},
    {OperatorKind::left_rl_derivative, "left_rl_derivative"},
    {OperatorKind::right_rl_derivative, "right_rl_derivative"},
    {OperatorKind::left_caputo, "left_caputo"},
    {OperatorKind::right_caputo, "right_caputo"},
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void ensure_self_test() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (!order_convention_self_test()) {
      throw std::logic_error("operator order-argument convention self-test failed");
    }
  });
}

void check_order_covers(const Mesh& mesh, const OrderFunction& order) {
  const double slack = 1e-12 * (mesh.b - mesh.a);
  if (order.a() > mesh.a + slack || order.b() < mesh.b - slack) {
    throw DomainError("order is certified on [" + fmt(order.a()) + ", " + fmt(order.b()) +
                      "], which does not cover the mesh [" + fmt(mesh.a) + ", " + fmt(mesh.b) + "]");
  }
}

void check_point(const Mesh& mesh, double t) {
  if (!(t >= mesh.a && t <= mesh.b)) {
    throw DomainError("t = " + fmt(t) + " lies outside [" + fmt(mesh.a) + ", " + fmt(mesh.b) + "]");
  }
}

// Folds a kernel-weighted rule into weights on the nodal samples of the
// Hermite interpolant.
std::vector<double> fold_rule(const Mesh& mesh, const QuadratureRule& rule) {
  const std::size_t n = mesh.points;
  std::vector<double> value(n, 0.0);
  std::vector<double> slope(n, 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double w = rule.weights[k];
    const HermiteWeights hw = hermite_weights(mesh, rule.nodes[k]);
    value[hw.cell] += w * hw.value_lo;
    slope[hw.cell] += w * hw.slope_lo;
    value[hw.cell + 1] += w * hw.value_hi;
    slope[hw.cell + 1] += w * hw.slope_hi;
  }
  const double inv_h = 1.0 / mesh.step();
  for (std::size_t i = 0; i < n; ++i) {
    if (slope[i] == 0.0) continue;
    const DerivativeStencil st = derivative_stencil(i, n);
    for (std::size_t k = 0; k < 5; ++k) value[st.first + k] += slope[i] * st.weights[k] * inv_h;
  }
  return value;
}

std::pair<double, double> exponent_bounds(const OrderFunction& order, OrderUse use) {
  if (use == OrderUse::direct) return {order.range_lo(), order.range_hi()};
  return {1.0 - order.range_hi(), 1.0 - order.range_lo()};
}

// Applies the derivative stencils on the left of a nodal matrix: D * M.
OperatorMatrix differentiate_rows(const OperatorMatrix& m, double h, double sign) {
  const std::size_t n = m.size();
  OperatorMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const DerivativeStencil st = derivative_stencil(i, n);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < 5; ++k) {
      const double c = sign * st.weights[k] / h;
      const auto src = m.row(st.first + k);
      for (std::size_t j = 0; j < n; ++j) dst[j] += c * src[j];
    }
  }
  return out;
}

// Applies the derivative stencils on the right of a nodal matrix: M * D.
OperatorMatrix differentiate_columns(const OperatorMatrix& m, double h, double sign) {
  const std::size_t n = m.size();
  OperatorMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = m.row(i);
    auto dst = out.row(i);
    for (std::size_t col = 0; col < n; ++col) {
      if (src[col] == 0.0) continue;
      const DerivativeStencil st = derivative_stencil(col, n);
      const double c = sign * src[col] / h;
      for (std::size_t k = 0; k < 5; ++k) dst[st.first + k] += c * st.weights[k];
    }
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double rl_derivative_at(const GridFunction& f, const OrderFunction& order, Side side, double t,
                        const QuadratureSpec& spec) {
  const Mesh& mesh = f.mesh();
  check_point(mesh, t);
  const OperatorKind kind = side == Side::left ? OperatorKind::left_rl_derivative : OperatorKind::right_rl_derivative;
  const auto [lo, hi] = valid_nodes(kind, mesh);
  const double t_lo = mesh.node(lo);
  const double t_hi = mesh.node(hi);
  if (t < t_lo || t > t_hi) {
    throw DomainError(std::string(operator_name(kind)) + ": t = " + fmt(t) +
                      " is outside the region where the derivative stencil is valid, [" + fmt(t_lo) + ", " +
                      fmt(t_hi) + "]");
  }
  const OperatorMatrix m = rl_integral_matrix(mesh, order, side, OrderUse::complement, spec);
  std::vector<double> inner = m.apply(f.values());
  std::vector<double> d = differentiate_samples(inner, mesh.step());
  if (side == Side::right) {
    for (double& v : d) v = -v;
  }
  return GridFunction(mesh, std::move(d))(t);
}

}  // namespace

std::string_view operator_name(OperatorKind kind) noexcept {
  for (const auto& [k, name] : kOperatorNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<OperatorKind> operator_from_name(std::string_view name) noexcept {
  for (const auto& [k, n] : kOperatorNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::function<double(double, double)> kernel_exponent(const OrderFunction& order, Side side, OrderUse use) {
  const bool complement = use == OrderUse::complement;
  if (side == Side::left) {
    return [&order, complement](double s, double tau) {
      const double a = order(s, tau);
      return complement ? 1.0 - a : a;
    };
  }
  return [&order, complement](double s, double tau) {
    const double a = order(tau, s);
    return complement ? 1.0 - a : a;
  };
}

std::vector<double> OperatorMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) y[i] = dot(row(i), x);
  return y;
}

std::vector<double> rl_integral_row(const Mesh& mesh, const OrderFunction& order, Side side, OrderUse use, double t,
                                    const QuadratureSpec& spec) {
  spec.validate();
  check_point(mesh, t);
  check_order_covers(mesh, order);
  ensure_self_test();

  const double lower = side == Side::left ? mesh.a : t;
  const double upper = side == Side::left ? t : mesh.b;
  if (!(lower < upper)) return std::vector<double>(mesh.points, 0.0);

  const auto exponent = kernel_exponent(order, side, use);
  const auto [mu_lo, mu_hi] = exponent_bounds(order, use);
  (void)mu_hi;
  const double q = effective_grading(spec, mu_lo);
  const SingularEnd end = side == Side::left ? SingularEnd::upper : SingularEnd::lower;
  const std::vector<double> breakpoints = mesh.nodes();

  int panels = spec.panels;
  auto build = [&](int p) {
    return fold_rule(mesh, singular_rule(exponent, true, lower, upper, end, p, q, breakpoints));
  };
  std::vector<double> previous = build(panels);
  double prev_change = std::numeric_limits<double>::infinity();
  for (int r = 0; r < spec.max_refinements; ++r) {
    panels *= 2;
    std::vector<double> current = build(panels);
    double change = 0.0;
    for (std::size_t j = 0; j < current.size(); ++j) change += std::abs(current[j] - previous[j]);
    if (change <= spec.tolerance) return current;
    previous = std::move(current);
    if (r + 1 == spec.max_refinements) {
      throw ConvergenceError("fractional integral at t = " + fmt(t) + ": weight change " + fmt(change) +
                                 " above tolerance " + fmt(spec.tolerance) + " after " +
                                 std::to_string(spec.max_refinements) + " refinements",
                             prev_change, change);
    }
    prev_change = change;
  }
  return previous;
}

OperatorMatrix rl_integral_matrix(const Mesh& mesh, const OrderFunction& order, Side side, OrderUse use,
                                  const QuadratureSpec& spec) {
  spec.validate();
  check_order_covers(mesh, order);
  ensure_self_test();
  const std::size_t n = mesh.points;
  OperatorMatrix m(n);
  std::exception_ptr failure;
  std::mutex failure_mutex;

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      const std::vector<double> row = rl_integral_row(mesh, order, side, use, mesh.node(i), spec);
      std::copy(row.begin(), row.end(), m.row(i).begin());
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return m;
}

OperatorMatrix operator_matrix(OperatorKind kind, const Mesh& mesh, const OrderFunction& order,
                               const QuadratureSpec& spec) {
  const double h = mesh.step();
  switch (kind) {
    case OperatorKind::left_integral:
      return rl_integral_matrix(mesh, order, Side::left, OrderUse::direct, spec);
    case OperatorKind::right_integral:
      return rl_integral_matrix(mesh, order, Side::right, OrderUse::direct, spec);
    case OperatorKind::left_rl_derivative:
      return differentiate_rows(rl_integral_matrix(mesh, order, Side::left, OrderUse::complement, spec), h, 1.0);
    case OperatorKind::right_rl_derivative:
      return differentiate_rows(rl_integral_matrix(mesh, order, Side::right, OrderUse::complement, spec), h, -1.0);
    case OperatorKind::left_caputo:
      return differentiate_columns(rl_integral_matrix(mesh, order, Side::left, OrderUse::complement, spec), h, 1.0);
    case OperatorKind::right_caputo:
      return differentiate_columns(rl_integral_matrix(mesh, order, Side::right, OrderUse::complement, spec), h,
                                   -1.0);
  }
  throw std::logic_error("unknown operator");
}

std::pair<std::size_t, std::size_t> valid_nodes(OperatorKind kind, const Mesh& mesh) noexcept {
  const std::size_t last = mesh.points - 1;
  switch (kind) {
    case OperatorKind::left_rl_derivative: return {2, last};
    case OperatorKind::right_rl_derivative: return {0, last - 2};
    default: return {0, last};
  }
}

double left_rl_integral(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec) {
  return dot(rl_integral_row(f.mesh(), order, Side::left, OrderUse::direct, t, spec), f.values());
}

double right_rl_integral(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec) {
  return dot(rl_integral_row(f.mesh(), order, Side::right, OrderUse::direct, t, spec), f.values());
}

double left_rl_derivative(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec) {
  return rl_derivative_at(f, order, Side::left, t, spec);
}

double right_rl_derivative(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec) {
  return rl_derivative_at(f, order, Side::right, t, spec);
}

double left_caputo(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec) {
  const GridFunction df = differentiate_grid(f);
  return dot(rl_integral_row(f.mesh(), order, Side::left, OrderUse::complement, t, spec), df.values());
}

double right_caputo(const GridFunction& f, const OrderFunction& order, double t, const QuadratureSpec& spec) {
  const GridFunction df = differentiate_grid(f);
  return -dot(rl_integral_row(f.mesh(), order, Side::right, OrderUse::complement, t, spec), df.values());
}

double apply_operator(OperatorKind kind, const GridFunction& f, const OrderFunction& order, double t,
                      const QuadratureSpec& spec) {
  switch (kind) {
    case OperatorKind::left_integral: return left_rl_integral(f, order, t, spec);
    case OperatorKind::right_integral: return right_rl_integral(f, order, t, spec);
    case OperatorKind::left_rl_derivative: return left_rl_derivative(f, order, t, spec);
    case OperatorKind::right_rl_derivative: return right_rl_derivative(f, order, t, spec);
    case OperatorKind::left_caputo: return left_caputo(f, order, t, spec);
    case OperatorKind::right_caputo: return right_caputo(f, order, t, spec);
  }
  throw std::logic_error("unknown operator");
}

double power_identity_reference(double gamma_exp, const OrderFunction& order, double a, double t) {
  if (!(gamma_exp > -1.0)) throw DomainError("power identity: exponent must exceed -1, got " + fmt(gamma_exp));
  if (order.kind() == OrderKind::bivariate) {
    throw PreconditionError("power identity: order '" + order.expression().to_string() + "' must depend on t only");
  }
  if (!(t >= a)) throw DomainError("power identity: need t >= a");
  const double beta = order(t, t);
  return gamma(gamma_exp + 1.0) * std::pow(t - a, gamma_exp + beta) / gamma(gamma_exp + beta + 1.0);
}

bool order_convention_self_test() {
  // On [0, 1] with f = 1: reading alpha(t, tau) = 0.3 + 0.4 t on the left at
  // t = 1 freezes the order at 0.7, and reading alpha(tau, t) with
  // alpha = 0.3 + 0.4 tau on the right at t = 0 freezes it at 0.3. Both then
  // have the closed form (length)^order / Gamma(order + 1) = 1 / Gamma(order + 1).
  // The swapped readings vary under the integral and give other values.
  const OrderFunction left_order = OrderFunction::parse("0.3 + 0.4*t", 0.3, 0.7, 4, 0.0, 1.0);
  const OrderFunction right_order = OrderFunction::parse("0.3 + 0.4*tau", 0.3, 0.7, 4, 0.0, 1.0);
  QuadratureSpec spec;
  spec.tolerance = 1e-11;

  auto integral = [&](const OrderFunction& order, Side read_as, SingularEnd end) {
    SingularIntegrand in;
    in.exponent = kernel_exponent(order, read_as, OrderUse::direct);
    in.exponent_lo = 0.3;
    in.exponent_hi = 0.7;
    in.density = [](double) { return 1.0; };
    in.singular_end = end;
    return integrate_singular(in, 0.0, 1.0, spec);
  };

  const double left = integral(left_order, Side::left, SingularEnd::upper);
  const double left_swapped = integral(left_order, Side::right, SingularEnd::upper);
  const double right = integral(right_order, Side::right, SingularEnd::lower);
  const double right_swapped = integral(right_order, Side::left, SingularEnd::lower);

  constexpr double tol = 1e-8;
  const bool left_ok = std::abs(left - 1.0 / gamma(1.7)) <= tol && std::abs(left_swapped - left) > 1e-3;
  const bool right_ok = std::abs(right - 1.0 / gamma(1.3)) <= tol && std::abs(right_swapped - right) > 1e-3;
  return left_ok && right_ok;
}

}  // namespace varfrac
