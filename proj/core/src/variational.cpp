#include "varfrac/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "varfrac/errors.hpp"

namespace varfrac {
namespace {

constexpr const char* kSlotNames[4] = {"y", "yp", "dcap", "iop"};
constexpr std::uint64_t kPartialCheckSeed = 0x9e3779b97f4a7c15ULL;
constexpr double kBoundaryTolerance = 1e-9;

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double& slot_ref(LagrangianSlots& s, std::size_t slot) {
  switch (slot) {
    case 0: return s.y;
    case 1: return s.yp;
    case 2: return s.dcap;
    default: return s.iop;
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Evaluates fn at every node. Failures at the two end nodes (for example a
// coefficient singular at t = a) are replaced by cubic extrapolation from the
// four nearest interior nodes; failures elsewhere propagate.
template <class Fn>
std::vector<double> nodal(std::size_t points, Fn&& fn, bool& extrapolated) {
  std::vector<double> v(points);
  std::size_t bad[2];
  std::size_t n_bad = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const bool end = i == 0 || i + 1 == points;
    try {
      v[i] = fn(i);
      if (!std::isfinite(v[i])) {
        if (!end) throw EvaluationError("Lagrangian term is not finite at node " + std::to_string(i));
        bad[n_bad++] = i;
      }
    } catch (const EvaluationError&) {
      if (!end) throw;
      bad[n_bad++] = i;
    }
  }
  for (std::size_t k = 0; k < n_bad; ++k) {
    extrapolated = true;
    if (bad[k] == 0) {
      v[0] = 4.0 * v[1] - 6.0 * v[2] + 4.0 * v[3] - v[4];
    } else {
      const std::size_t n = points - 1;
      v[n] = 4.0 * v[n - 1] - 6.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4];
    }
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lagrangian

Lagrangian::Lagrangian(Expression f, std::optional<Partials> partials, std::optional<double> xi, double a, double b)
    : f_(std::move(f)), partials_(std::move(partials)), xi_(xi) {
  VariableSet allowed;
  for (Variable v : {Variable::t, Variable::y, Variable::yp, Variable::dcap, Variable::iop}) allowed.insert(v);
  if (xi_) allowed.insert(Variable::xi);
  auto check_vars = [&](const Expression& e, const char* what) {
    if (e.free_variables().contains(Variable::xi) && !xi_) {
      throw ConfigError(std::string(what) + " uses xi but no value of xi was given");
    }
    if (!e.free_variables().subset_of(allowed)) {
      throw ConfigError(std::string(what) + " may only use t, y, yp, dcap, iop and xi");
    }
  };
  check_vars(f_, "Lagrangian");
  if (partials_) {
    check_vars(partials_->dy, "partial dF/dy");
    check_vars(partials_->dyp, "partial dF/dyp");
    check_vars(partials_->ddcap, "partial dF/ddcap");
    check_vars(partials_->diop, "partial dF/diop");
    check_partials(a, b);
  }
}

Bindings Lagrangian::bind(const LagrangianSlots& s) const {
  Bindings bnd;
  bnd.set(Variable::t, s.t).set(Variable::y, s.y).set(Variable::yp, s.yp).set(Variable::dcap, s.dcap).set(
      Variable::iop, s.iop);
  if (xi_) bnd.set(Variable::xi, *xi_);
  return bnd;
}

double Lagrangian::value(const LagrangianSlots& s) const {
  return f_.evaluate(bind(s));
}

double Lagrangian::finite_difference(std::size_t slot, const LagrangianSlots& s) const {
  LagrangianSlots plus = s;
  LagrangianSlots minus = s;
  const double x = slot_ref(plus, slot);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  slot_ref(plus, slot) = x + h;
  slot_ref(minus, slot) = x - h;
  return (value(plus) - value(minus)) / (2.0 * h);
}

double Lagrangian::partial(std::size_t slot, const LagrangianSlots& s) const {
  if (!partials_) return finite_difference(slot, s);
  const Partials& p = *partials_;
  const Expression* e = slot == 0 ? &p.dy : slot == 1 ? &p.dyp : slot == 2 ? &p.ddcap : &p.diop;
  return e->evaluate(bind(s));
}

std::array<double, 4> Lagrangian::gradient(const LagrangianSlots& s) const {
  return {partial(0, s), partial(1, s), partial(2, s), partial(3, s)};
}

void Lagrangian::check_partials(double a, double b) const {
  std::mt19937_64 rng(kPartialCheckSeed);
  for (std::size_t k = 0; k < kPartialSamples; ++k) {
    LagrangianSlots s;
    s.t = a + (b - a) * (0.01 + 0.98 * unit_uniform(rng));
    s.y = -1.0 + 2.0 * unit_uniform(rng);
    s.yp = -1.0 + 2.0 * unit_uniform(rng);
    s.dcap = -1.0 + 2.0 * unit_uniform(rng);
    s.iop = -1.0 + 2.0 * unit_uniform(rng);
    for (std::size_t slot = 0; slot < 4; ++slot) {
      double analytic = 0.0;
      double numeric = 0.0;
      try {
        analytic = partial(slot, s);
        numeric = finite_difference(slot, s);
      } catch (const EvaluationError&) {
        continue;
      }
      if (std::abs(analytic - numeric) > 1e-4 * std::max(1.0, std::abs(analytic))) {
        throw PreconditionError("supplied partial dF/d" + std::string(kSlotNames[slot]) +
                                " disagrees with finite differences at (t, y, yp, dcap, iop) = (" + fmt(s.t) + ", " +
                                fmt(s.y) + ", " + fmt(s.yp) + ", " + fmt(s.dcap) + ", " + fmt(s.iop) +
                                "): analytic " + fmt(analytic) + ", numeric " + fmt(numeric));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Problem

void VariationalProblem::validate() const {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw DomainError("problem interval must satisfy a < b");
  if (!std::isfinite(ya) || !std::isfinite(yb)) throw DomainError("boundary values must be finite");
  if (mesh_points < 5) throw DomainError("problem mesh needs at least 5 points");
  alpha.require_derivative_order("alpha");
  beta.require_integral_order("beta");
  for (const OrderFunction* o : {&alpha, &beta}) {
    if (o->a() > a || o->b() < b) {
      throw PreconditionError("order " + o->expression().to_string() + " is certified on [" + fmt(o->a()) + ", " +
                              fmt(o->b()) + "], which does not cover the problem interval");
    }
  }
}

DiscreteProblem::DiscreteProblem(const VariationalProblem& problem, const QuadratureSpec& spec)
    : problem_(problem), spec_(spec) {
  problem_.validate();
  mesh_ = problem_.mesh();
  nodes_ = mesh_.nodes();
  caputo_left_ = operator_matrix(OperatorKind::left_caputo, mesh_, problem_.alpha, spec_);
  integral_left_ = rl_integral_matrix(mesh_, problem_.beta, Side::left, OrderUse::direct, spec_);
  integral_right_ = rl_integral_matrix(mesh_, problem_.beta, Side::right, OrderUse::direct, spec_);
  rl_right_ = operator_matrix(OperatorKind::right_rl_derivative, mesh_, problem_.alpha, spec_);
}

void DiscreteProblem::check_samples(std::span<const double> y) const {
  if (y.size() != mesh_.points) {
    throw DomainError("candidate has " + std::to_string(y.size()) + " samples, the problem mesh has " +
                      std::to_string(mesh_.points));
  }
  const double ya = problem_.ya;
  const double yb = problem_.yb;
  if (std::abs(y.front() - ya) > kBoundaryTolerance * std::max(1.0, std::abs(ya))) {
    throw PreconditionError("candidate violates y(a) = " + fmt(ya) + ": y(a) = " + fmt(y.front()));
  }
  if (std::abs(y.back() - yb) > kBoundaryTolerance * std::max(1.0, std::abs(yb))) {
    throw PreconditionError("candidate violates y(b) = " + fmt(yb) + ": y(b) = " + fmt(y.back()));
  }
}

DiscreteProblem::Slots DiscreteProblem::slots(std::span<const double> y) const {
  return {differentiate_samples(y, mesh_.step()), caputo_left_.apply(y), integral_left_.apply(y)};
}

LagrangianSlots DiscreteProblem::at(std::span<const double> y, const Slots& s, std::size_t i) const {
  return {nodes_[i], y[i], s.yp[i], s.dcap[i], s.iop[i]};
}

double DiscreteProblem::functional(std::span<const double> y) const {
  check_samples(y);
  const Slots s = slots(y);
  bool extrapolated = false;
  const std::vector<double> f =
      nodal(mesh_.points, [&](std::size_t i) { return problem_.lagrangian.value(at(y, s, i)); }, extrapolated);
  return simpson(f, mesh_.step());
}

ELReport DiscreteProblem::residual(std::span<const double> y) const {
  check_samples(y);
  const Slots s = slots(y);
  bool extrapolated = false;
  std::array<std::vector<double>, 4> p;
  for (std::size_t slot = 0; slot < 4; ++slot) {
    p[slot] = nodal(
        mesh_.points, [&](std::size_t i) { return problem_.lagrangian.partial(slot, at(y, s, i)); }, extrapolated);
  }
  const std::vector<double> dp1 = differentiate_samples(p[1], mesh_.step());
  const std::vector<double> der = rl_right_.apply(p[2]);
  const std::vector<double> integ = integral_right_.apply(p[3]);

  ELReport r;
  r.first_node = 2;
  r.last_node = mesh_.intervals() - 2;
  for (std::size_t i = r.first_node; i <= r.last_node; ++i) {
    r.t.push_back(nodes_[i]);
    r.term_y.push_back(p[0][i]);
    r.term_yp.push_back(-dp1[i]);
    r.term_integral.push_back(integ[i]);
    r.term_derivative.push_back(der[i]);
    const double res = p[0][i] - dp1[i] + integ[i] + der[i];
    r.residual.push_back(res);
    r.sup_norm = std::max(r.sup_norm, std::abs(res));
  }
  r.metadata = {{"valid_interval", {nodes_[r.first_node], nodes_[r.last_node]}},
                {"mesh_points", mesh_.points},
                {"endpoint_extrapolated", extrapolated},
                {"alpha", problem_.alpha.expression().to_string()},
                {"beta", problem_.beta.expression().to_string()},
                {"problem", problem_.metadata}};
  return r;
}

double DiscreteProblem::gateaux(std::span<const double> y, std::span<const double> eta) const {
  check_samples(y);
  if (eta.size() != mesh_.points) throw DomainError("direction has the wrong number of samples");
  if (std::abs(eta.front()) > 1e-12 || std::abs(eta.back()) > 1e-12) {
    throw PreconditionError("direction must vanish at a and b");
  }
  const Slots s = slots(y);
  const Slots e = slots(eta);
  bool extrapolated = false;
  std::array<std::vector<double>, 4> p;
  for (std::size_t slot = 0; slot < 4; ++slot) {
    p[slot] = nodal(
        mesh_.points, [&](std::size_t i) { return problem_.lagrangian.partial(slot, at(y, s, i)); }, extrapolated);
  }
  std::vector<double> integrand(mesh_.points);
  for (std::size_t i = 0; i < mesh_.points; ++i) {
    integrand[i] = p[0][i] * eta[i] + p[1][i] * e.yp[i] + p[2][i] * e.dcap[i] + p[3][i] * e.iop[i];
  }
  return simpson(integrand, mesh_.step());
}

double evaluate_functional(const VariationalProblem& problem, const GridFunction& y, const QuadratureSpec& spec) {
  const DiscreteProblem d(problem, spec);
  if (!(y.mesh() == d.mesh())) throw DomainError("candidate is not sampled on the problem mesh");
  return d.functional(y.values());
}

ELReport el_residual(const VariationalProblem& problem, const GridFunction& y, const QuadratureSpec& spec) {
  const DiscreteProblem d(problem, spec);
  if (!(y.mesh() == d.mesh())) throw DomainError("candidate is not sampled on the problem mesh");
  return d.residual(y.values());
}

double gateaux_derivative(const VariationalProblem& problem, const GridFunction& y, const GridFunction& eta,
                          const QuadratureSpec& spec) {
  const DiscreteProblem d(problem, spec);
  if (!(y.mesh() == d.mesh()) || !(eta.mesh() == d.mesh())) {
    throw DomainError("candidate and direction must be sampled on the problem mesh");
  }
  return d.gateaux(y.values(), eta.values());
}

// ---------------------------------------------------------------------------
// Serialization

void to_json(nlohmann::json& j, const ELReport& r) {
  j = nlohmann::json{{"t", r.t},
                     {"term_dy", r.term_y},
                     {"term_dyp", r.term_yp},
                     {"term_int", r.term_integral},
                     {"term_der", r.term_derivative},
                     {"residual", r.residual},
                     {"sup_norm", r.sup_norm},
                     {"first_node", r.first_node},
                     {"last_node", r.last_node},
                     {"metadata", r.metadata}};
}

std::string to_csv(const ELReport& r) {
  std::string out = "t,term_dy,term_dyp,term_int,term_der,residual\n";
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    out += fmt(r.t[i]) + ',' + fmt(r.term_y[i]) + ',' + fmt(r.term_yp[i]) + ',' + fmt(r.term_integral[i]) + ',' +
           fmt(r.term_derivative[i]) + ',' + fmt(r.residual[i]) + '\n';
  }
  return out;
}

std::string_view ritz_status_name(RitzStatus s) noexcept {
  switch (s) {
    case RitzStatus::converged: return "converged";
    case RitzStatus::max_iterations: return "max_iterations";
    case RitzStatus::stalled: return "stalled";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const RitzSolution& r) {
  j = nlohmann::json{{"basis_count", r.basis_count},
                     {"coefficients", r.coefficients},
                     {"functional", r.functional},
                     {"stationarity", r.stationarity},
                     {"iterations", r.iterations},
                     {"status", std::string(ritz_status_name(r.status))},
                     {"converged", r.converged()},
                     {"history", r.history},
                     {"t", r.t},
                     {"y", r.y},
                     {"metadata", r.metadata}};
}

std::string to_csv(const RitzSolution& r) {
  std::string out = "t,y\n";
  for (std::size_t i = 0; i < r.t.size(); ++i) out += fmt(r.t[i]) + ',' + fmt(r.y[i]) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Ritz

RitzSolution ritz_minimize(const VariationalProblem& problem, std::size_t basis_count, const QuadratureSpec& spec,
                           const RitzOptions& options) {
  const DiscreteProblem d(problem, spec);
  return ritz_minimize(d, basis_count, options);
}

RitzSolution ritz_minimize(const DiscreteProblem& d, std::size_t basis_count, const RitzOptions& options) {
  if (basis_count == 0) throw DomainError("ritz_minimize: basis_count must be >= 1");
  if (!(options.opt_tol > 0.0)) throw DomainError("ritz_minimize: opt_tol must be positive");
  const VariationalProblem& pb = d.problem();
  const Mesh& mesh = d.mesh();
  const std::size_t n = mesh.intervals();
  const std::size_t k_count = basis_count;

  std::vector<double> base(mesh.points);
  std::vector<std::vector<double>> phi(k_count, std::vector<double>(mesh.points, 0.0));
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n);
    base[i] = pb.ya + (pb.yb - pb.ya) * s;
    if (i == 0 || i == n) continue;
    for (std::size_t k = 0; k < k_count; ++k) phi[k][i] = std::sin(static_cast<double>(k + 1) * std::numbers::pi * s);
  }
  base[0] = pb.ya;
  base[n] = pb.yb;

  auto synth = [&](const std::vector<double>& c) {
    std::vector<double> y = base;
    for (std::size_t k = 0; k < k_count; ++k) {
      for (std::size_t i = 1; i < n; ++i) y[i] += c[k] * phi[k][i];
    }
    return y;
  };
  auto objective = [&](const std::vector<double>& c) {
    try {
      return d.functional(synth(c));
    } catch (const EvaluationError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto gradient = [&](const std::vector<double>& c) {
    std::vector<double> g(k_count);
    std::vector<double> probe = c;
    for (std::size_t k = 0; k < k_count; ++k) {
      probe[k] = c[k] + options.gradient_step;
      const double up = objective(probe);
      probe[k] = c[k] - options.gradient_step;
      const double down = objective(probe);
      probe[k] = c[k];
      g[k] = (up - down) / (2.0 * options.gradient_step);
    }
    return g;
  };
  auto sup = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  RitzSolution sol;
  sol.basis_count = k_count;
  std::vector<double> c(k_count, 0.0);
  double j = d.functional(synth(c));
  sol.history.push_back(j);
  double step = 1.0;
  sol.status = RitzStatus::max_iterations;
  std::vector<double> g = gradient(c);
  double gnorm = sup(g);
  std::size_t iter = 0;
  for (; iter < options.max_iters; ++iter) {
    if (!std::isfinite(gnorm)) {
      sol.status = RitzStatus::stalled;
      break;
    }
    if (gnorm <= options.opt_tol) {
      sol.status = RitzStatus::converged;
      break;
    }
    double g2 = 0.0;
    for (double x : g) g2 += x * x;
    double s = std::min(2.0 * step, 1e6);
    bool accepted = false;
    std::vector<double> trial(k_count);
    for (int h = 0; h < 80; ++h, s *= 0.5) {
      for (std::size_t k = 0; k < k_count; ++k) trial[k] = c[k] - s * g[k];
      const double jt = objective(trial);
      if (jt <= j - 1e-4 * s * g2) {
        c = trial;
        j = jt;
        step = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      sol.status = RitzStatus::stalled;
      break;
    }
    sol.history.push_back(j);
    g = gradient(c);
    gnorm = sup(g);
  }
  if (iter == options.max_iters && gnorm <= options.opt_tol) sol.status = RitzStatus::converged;

  sol.iterations = iter;
  sol.coefficients = c;
  sol.functional = j;
  sol.stationarity = gnorm;
  sol.t = mesh.nodes();
  sol.y = synth(c);
  sol.metadata = {{"basis", "linear interpolant + sin(k pi (t - a) / (b - a)), k = 1.." + std::to_string(k_count)},
                  {"opt_tol", options.opt_tol},
                  {"max_iters", options.max_iters},
                  {"mesh_points", mesh.points},
                  {"problem", pb.metadata}};
  return sol;
}

}  // namespace varfrac
