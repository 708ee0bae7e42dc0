#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "varfrac/expr.hpp"
#include "varfrac/grid_function.hpp"
#include "varfrac/operators.hpp"
#include "varfrac/order_function.hpp"
#include "varfrac/quadrature.hpp"

namespace varfrac {

/// Values of the Lagrangian's slots at one point: F(t, y, y', Caputo y, I y).
struct LagrangianSlots {
  double t = 0.0;
  double y = 0.0;
  double yp = 0.0;
  double dcap = 0.0;
  double iop = 0.0;
};

/// F(t, y, yp, dcap, iop) given as an expression, with optional analytic
/// partials for the four function slots. Missing partials are central finite
/// differences. Supplied partials are compared against finite differences at
/// construction on 100 seeded points with t in [a, b] and the other slots in
/// [-1, 1]; a mismatch raises PreconditionError naming the slot.
class Lagrangian {
 public:
  struct Partials {
    Expression dy;
    Expression dyp;
    Expression ddcap;
    Expression diop;
  };

  Lagrangian(Expression f, std::optional<Partials> partials, std::optional<double> xi, double a, double b);

  double value(const LagrangianSlots& s) const;
  /// (dF/dy, dF/dyp, dF/ddcap, dF/diop).
  std::array<double, 4> gradient(const LagrangianSlots& s) const;
  double partial(std::size_t slot, const LagrangianSlots& s) const;

  const Expression& expression() const noexcept { return f_; }
  const std::optional<Partials>& partials() const noexcept { return partials_; }
  std::optional<double> xi() const noexcept { return xi_; }

  static constexpr std::size_t kPartialSamples = 100;

 private:
  Bindings bind(const LagrangianSlots& s) const;
  double finite_difference(std::size_t slot, const LagrangianSlots& s) const;
  void check_partials(double a, double b) const;

  Expression f_;
  std::optional<Partials> partials_;
  std::optional<double> xi_;
};

/// Minimize J[y] = int_a^b F(t, y, y', left Caputo^alpha y, left integral^beta y) dt
/// subject to y(a) = ya, y(b) = yb.
struct VariationalProblem {
  double a;
  double b;
  double ya;
  double yb;
  OrderFunction alpha;
  OrderFunction beta;
  Lagrangian lagrangian;
  std::size_t mesh_points = 201;
  nlohmann::json metadata = nlohmann::json::object();

  Mesh mesh() const { return Mesh(a, b, mesh_points); }
  /// Throws PreconditionError unless 1/n < beta and alpha < 1 - 1/n and both
  /// orders are certified on [a, b].
  void validate() const;
};

/// Per-node Euler-Lagrange residual
///   dF/dy - d/dt dF/dyp + right integral^beta (dF/diop) + right RL^alpha (dF/ddcap)
/// restricted to nodes [2, N-2], where every term is trusted.
struct ELReport {
  std::vector<double> t;
  std::vector<double> term_y;
  std::vector<double> term_yp;
  std::vector<double> term_integral;
  std::vector<double> term_derivative;
  std::vector<double> residual;
  std::size_t first_node = 0;
  std::size_t last_node = 0;
  double sup_norm = 0.0;
  nlohmann::json metadata = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const ELReport& r);
std::string to_csv(const ELReport& r);

enum class RitzStatus { converged, max_iterations, stalled };

std::string_view ritz_status_name(RitzStatus s) noexcept;

struct RitzSolution {
  std::size_t basis_count = 0;
  std::vector<double> coefficients;
  std::vector<double> t;
  std::vector<double> y;
  double functional = 0.0;
  double stationarity = 0.0;  ///< sup norm of the coefficient gradient
  std::size_t iterations = 0;
  RitzStatus status = RitzStatus::max_iterations;
  std::vector<double> history;  ///< functional value after each accepted step, starting from the initial guess
  nlohmann::json metadata = nlohmann::json::object();

  bool converged() const noexcept { return status == RitzStatus::converged; }
};

void to_json(nlohmann::json& j, const RitzSolution& r);
std::string to_csv(const RitzSolution& r);

/// Discretized problem: the four operator matrices are assembled once and
/// reused for every candidate y on the problem mesh.
class DiscreteProblem {
 public:
  DiscreteProblem(const VariationalProblem& problem, const QuadratureSpec& spec);

  const VariationalProblem& problem() const noexcept { return problem_; }
  const Mesh& mesh() const noexcept { return mesh_; }

  /// Samples at the mesh nodes; throws DomainError on a size mismatch and
  /// PreconditionError if the boundary values are not (ya, yb).
  double functional(std::span<const double> y) const;
  ELReport residual(std::span<const double> y) const;
  /// Directional derivative of the discrete functional at y along eta, eta
  /// vanishing at both ends.
  double gateaux(std::span<const double> y, std::span<const double> eta) const;

 private:
  struct Slots {
    std::vector<double> yp;
    std::vector<double> dcap;
    std::vector<double> iop;
  };
  void check_samples(std::span<const double> y) const;
  Slots slots(std::span<const double> y) const;
  LagrangianSlots at(std::span<const double> y, const Slots& s, std::size_t i) const;

  VariationalProblem problem_;
  QuadratureSpec spec_;
  Mesh mesh_;
  std::vector<double> nodes_;
  OperatorMatrix caputo_left_;
  OperatorMatrix integral_left_;
  OperatorMatrix integral_right_;
  OperatorMatrix rl_right_;
};

double evaluate_functional(const VariationalProblem& problem, const GridFunction& y, const QuadratureSpec& spec);
ELReport el_residual(const VariationalProblem& problem, const GridFunction& y, const QuadratureSpec& spec);
double gateaux_derivative(const VariationalProblem& problem, const GridFunction& y, const GridFunction& eta,
                          const QuadratureSpec& spec);

struct RitzOptions {
  double opt_tol = 1e-6;
  std::size_t max_iters = 2000;
  double gradient_step = 1e-5;
};

/// Minimizes over y = linear interpolant of (ya, yb) + sum_k c_k sin(k pi (t - a) / (b - a)),
/// k = 1..basis_count, by gradient descent with Armijo backtracking. Never
/// throws on non-convergence; the status and the best iterate are reported.
RitzSolution ritz_minimize(const VariationalProblem& problem, std::size_t basis_count, const QuadratureSpec& spec,
                           const RitzOptions& options = {});
RitzSolution ritz_minimize(const DiscreteProblem& discrete, std::size_t basis_count, const RitzOptions& options = {});

/// Order entry of a JSON document: an expression string (constant orders
/// only), a number, or {"expr", "range": [lo, hi], "n"}. Non-constant orders
/// must declare their range. Throws ConfigError, ParseError or
/// PreconditionError (range hypotheses).
OrderFunction order_from_json(const nlohmann::json& entry, std::string_view name, int default_n, double a, double b);

/// Built-in demonstration problems.
///   id 1: params {"beta": {"expr", "range"?}, "n"?, "a"?, "b"?, "mesh_points"?}
///   id 2: params {"xi", "alpha": {...}, "beta": {...}, "n"?, "a"?, "b"?, "mesh_points"?}
/// Order entries may also be plain expression strings when constant. Throws
/// ConfigError for missing or malformed parameters.
VariationalProblem example_problem(int id, const nlohmann::json& params);

/// Default parameters of the built-in problems.
nlohmann::json example_defaults(int id);

}  // namespace varfrac
