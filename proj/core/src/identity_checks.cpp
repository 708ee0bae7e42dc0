#include "varfrac/identity_checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "varfrac/errors.hpp"

namespace varfrac {
namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double l1_norm(std::span<const double> v, double h) {
  std::vector<double> abs_v(v.size());
  std::transform(v.begin(), v.end(), abs_v.begin(), [](double x) { return std::abs(x); });
  return simpson(abs_v, h);
}

std::vector<double> product(std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

std::vector<double> random_piecewise_linear(const Mesh& mesh, std::size_t knots, std::mt19937_64& rng) {
  std::vector<double> knot_values(knots);
  for (double& v : knot_values) v = -1.0 + 2.0 * unit_uniform(rng);
  const double width = (mesh.b - mesh.a) / static_cast<double>(knots - 1);
  std::vector<double> out(mesh.points);
  for (std::size_t i = 0; i < mesh.points; ++i) {
    const double s = (mesh.node(i) - mesh.a) / width;
    const auto k = std::min(static_cast<std::size_t>(std::max(s, 0.0)), knots - 2);
    const double w = s - static_cast<double>(k);
    out[i] = (1.0 - w) * knot_values[k] + w * knot_values[k + 1];
  }
  return out;
}

}  // namespace

IdentityReport make_report(double lhs, double rhs, double tolerance, nlohmann::json metadata) {
  IdentityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.passed = r.abs_gap <= tolerance;
  r.metadata = std::move(metadata);
  return r;
}

void to_json(nlohmann::json& j, const IdentityReport& r) {
  j = nlohmann::json{{"lhs", r.lhs},           {"rhs", r.rhs},       {"abs_gap", r.abs_gap},
                     {"tolerance", r.tolerance}, {"passed", r.passed}, {"metadata", r.metadata}};
}

double default_ibp_tolerance(const QuadratureSpec& spec) noexcept {
  return std::max(1e-4, 10.0 * spec.tolerance);
}

double l1_norm_ratio(const GridFunction& f, const OrderFunction& order, const QuadratureSpec& spec) {
  order.require_integral_order("norm ratio order");
  const Mesh& mesh = f.mesh();
  const double norm_f = l1_norm(f.values(), mesh.step());
  if (!(norm_f > 0.0)) throw DomainError("l1_norm_ratio: f has zero L1 norm");
  const OperatorMatrix m = rl_integral_matrix(mesh, order, Side::left, OrderUse::direct, spec);
  return l1_norm(m.apply(f.values()), mesh.step()) / norm_f;
}

NormRatioResult norm_ratio_trials(const OrderFunction& order, std::size_t trials, std::uint64_t seed,
                                  const QuadratureSpec& spec, const NormRatioOptions& options) {
  order.require_integral_order("norm ratio order");
  if (options.knots < 2) throw DomainError("norm_ratio_trials: need at least 2 knots");
  const Mesh mesh(order.a(), order.b(), options.mesh_points);
  const OperatorMatrix m = rl_integral_matrix(mesh, order, Side::left, OrderUse::direct, spec);

  NormRatioResult result;
  result.bound = static_cast<double>(order.margin_n()) + (order.b() - order.a());
  result.ratios.reserve(trials);
  std::mt19937_64 rng(seed);
  while (result.ratios.size() < trials) {
    const std::vector<double> f = random_piecewise_linear(mesh, options.knots, rng);
    const double norm_f = l1_norm(f, mesh.step());
    if (norm_f < options.min_l1_norm) {
      ++result.rejected;
      continue;
    }
    const double ratio = l1_norm(m.apply(f), mesh.step()) / norm_f;
    result.ratios.push_back(ratio);
    result.max_ratio = std::max(result.max_ratio, ratio);
    if (!(ratio < result.bound)) ++result.violations;
  }
  return result;
}

double estimate_norm_ratio(const OrderFunction& order, std::size_t trials, std::uint64_t seed,
                           const QuadratureSpec& spec) {
  return norm_ratio_trials(order, trials, seed, spec).max_ratio;
}

IbpHarness::IbpHarness(const Mesh& mesh, const OrderFunction& order, const QuadratureSpec& spec, bool caputo)
    : mesh_(mesh), order_(order), spec_(spec), caputo_(caputo) {
  if (mesh.a < order.a() || mesh.b > order.b()) {
    throw DomainError("IbpHarness: mesh interval exceeds the certified domain of the order");
  }
  if (caputo) {
    order.require_derivative_order("Caputo order");
    if (mesh.points < 2 * kBoundaryLayer + 1) {
      throw DomainError("IbpHarness: Caputo check needs at least " + std::to_string(2 * kBoundaryLayer + 1) +
                        " mesh points");
    }
    left_ = operator_matrix(OperatorKind::left_caputo, mesh, order, spec);
    right_ = rl_integral_matrix(mesh, order, Side::right, OrderUse::complement, spec);
  } else {
    order.require_integral_order("integral order");
    left_ = rl_integral_matrix(mesh, order, Side::left, OrderUse::direct, spec);
    right_ = rl_integral_matrix(mesh, order, Side::right, OrderUse::direct, spec);
  }
}

void IbpHarness::check_mesh(const GridFunction& f, const GridFunction& g) const {
  if (!(f.mesh() == mesh_) || !(g.mesh() == mesh_)) {
    throw DomainError("IbpHarness: f and g must be sampled on the harness mesh");
  }
}

nlohmann::json IbpHarness::metadata(const char* check) const {
  return {{"check", check},
          {"order", order_.expression().to_string()},
          {"order_kind", std::string(order_kind_name(order_.kind()))},
          {"interval", {mesh_.a, mesh_.b}},
          {"mesh_points", mesh_.points},
          {"quadrature_tolerance", spec_.tolerance}};
}

IdentityReport IbpHarness::integrals(const GridFunction& f, const GridFunction& g,
                                     std::optional<double> tolerance) const {
  if (caputo_) throw PreconditionError("IbpHarness: constructed for the Caputo identity");
  check_mesh(f, g);
  const double h = mesh_.step();
  const double lhs = simpson(product(g.values(), left_.apply(f.values())), h);
  const double rhs = simpson(product(f.values(), right_.apply(g.values())), h);
  return make_report(lhs, rhs, tolerance.value_or(default_ibp_tolerance(spec_)), metadata("ibp_integrals"));
}

IdentityReport IbpHarness::caputo(const GridFunction& f, const GridFunction& g,
                                  std::optional<double> tolerance) const {
  if (!caputo_) throw PreconditionError("IbpHarness: constructed for the integral identity");
  check_mesh(f, g);
  const double h = mesh_.step();
  const std::size_t n = mesh_.intervals();
  const double lhs = simpson(product(g.values(), left_.apply(f.values())), h);

  const std::vector<double> big_i = right_.apply(g.values());
  const std::vector<double> di = differentiate_samples(big_i, h);
  const std::vector<double> df = differentiate_samples(f.values(), h);
  const double boundary = f[n] * big_i[n] - f[0] * big_i[0];

  // int_a^{t_m} f * (-I') by Simpson, then the layer [t_m, b] by parts:
  // int f * (-I') = f(t_m) I(t_m) - f(b) I(b) + int I f'.
  const std::size_t m = n - kBoundaryLayer;
  std::vector<double> interior(m + 1);
  for (std::size_t i = 0; i <= m; ++i) interior[i] = -f[i] * di[i];
  std::vector<double> layer(kBoundaryLayer + 1);
  for (std::size_t i = 0; i <= kBoundaryLayer; ++i) layer[i] = big_i[m + i] * df[m + i];
  const double bulk = simpson(interior, h) + f[m] * big_i[m] - f[n] * big_i[n] + simpson(layer, h);

  nlohmann::json meta = metadata("ibp_caputo");
  meta["boundary_term"] = boundary;
  meta["boundary_layer_cells"] = kBoundaryLayer;
  return make_report(lhs, boundary + bulk, tolerance.value_or(default_ibp_tolerance(spec_)), std::move(meta));
}

const std::vector<TestFunction>& smooth_family() {
  static const std::vector<TestFunction> family = {
      {"1", [](double) { return 1.0; }},
      {"t", [](double t) { return t; }},
      {"t^2", [](double t) { return t * t; }},
      {"sin(t)", [](double t) { return std::sin(t); }},
      {"cos(t)", [](double t) { return std::cos(t); }},
  };
  return family;
}

OrderFunction FamilyOrder::build() const {
  return OrderFunction::parse(expr, range_lo, range_hi, margin_n, a, b);
}

std::vector<FamilyOrder> builtin_ibp_orders(bool caputo) {
  if (caputo) {
    return {{"0.3", 0.3, 0.3, 3, 0.25, 1.25},
            {"0.3 + 0.1*t", 0.325, 0.425, 3, 0.25, 1.25},
            {"0.2 + 0.3*tau - 0.1*t", 0.15, 0.55, 3, 0.25, 1.25}};
  }
  return {{"0.5", 0.5, 0.5, 3, 0.0, 1.0},
          {"0.4 + 0.2*tau*t", 0.4, 0.6, 3, 0.0, 1.0},
          {"0.6 + 0.3*t - 0.2*tau", 0.4, 0.9, 3, 0.0, 1.0}};
}

std::vector<IdentityReport> run_ibp_family(bool caputo, const QuadratureSpec& spec, std::size_t mesh_points) {
  std::vector<IdentityReport> reports;
  for (const FamilyOrder& fo : builtin_ibp_orders(caputo)) {
    const OrderFunction order = fo.build();
    const Mesh mesh(fo.a, fo.b, mesh_points);
    const IbpHarness harness(mesh, order, spec, caputo);
    for (const TestFunction& f : smooth_family()) {
      const GridFunction fs = GridFunction::sample(mesh, f.fn);
      for (const TestFunction& g : smooth_family()) {
        const GridFunction gs = GridFunction::sample(mesh, g.fn);
        IdentityReport r = caputo ? harness.caputo(fs, gs) : harness.integrals(fs, gs);
        r.metadata["f"] = f.name;
        r.metadata["g"] = g.name;
        reports.push_back(std::move(r));
      }
    }
  }
  return reports;
}

IdentityReport verify_ibp_integrals(const GridFunction& f, const GridFunction& g, const OrderFunction& order,
                                    const QuadratureSpec& spec, std::optional<double> tolerance) {
  return IbpHarness(f.mesh(), order, spec, false).integrals(f, g, tolerance);
}

IdentityReport verify_ibp_caputo(const GridFunction& f, const GridFunction& g, const OrderFunction& order,
                                 const QuadratureSpec& spec, std::optional<double> tolerance) {
  return IbpHarness(f.mesh(), order, spec, true).caputo(f, g, tolerance);
}

}  // namespace varfrac
