#include <charconv>
#include <optional>
#include <utility>
#include <string>

#include "varfrac/errors.hpp"
#include "varfrac/variational.hpp"

namespace varfrac {
namespace {

std::string num(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return "(" + std::string(buf, ptr) + ")";
}

double get_number(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) throw ConfigError(std::string("example parameter '") + key + "' must be a number");
  return v.get<double>();
}

OrderFunction required_order(const nlohmann::json& params, const char* key, int n, double a, double b) {
  if (!params.contains(key)) throw ConfigError(std::string("example parameter '") + key + "' is required");
  return order_from_json(params.at(key), key, n, a, b);
}

int get_n(const nlohmann::json& params, int fallback) {
  if (!params.contains("n")) return fallback;
  if (!params.at("n").is_number_integer()) throw ConfigError("example parameter 'n' must be an integer");
  return params.at("n").get<int>();
}

std::size_t get_points(const nlohmann::json& params) {
  if (!params.contains("mesh_points")) return 201;
  const auto& v = params.at("mesh_points");
  if (!v.is_number_integer() || v.get<long long>() < 5) {
    throw ConfigError("example parameter 'mesh_points' must be an integer >= 5");
  }
  return v.get<std::size_t>();
}

// F = sqrt(1 + c(t) iop^2 - iop), c(t) = Gamma(beta + 3) / (2 Gamma(3) (t - a)^(2 + beta)).
// F is minimized pointwise by iop = 1 / (2 c), which is the left integral of (t - a)^2.
VariationalProblem example_one(const nlohmann::json& params) {
  const double a = get_number(params, "a", 0.0);
  const double b = get_number(params, "b", 1.0);
  const int n = get_n(params, 5);
  OrderFunction beta = required_order(params, "beta", n, a, b);
  if (beta.kind() == OrderKind::bivariate) throw ConfigError("example 1 needs an order beta that depends on t only");
  OrderFunction alpha = OrderFunction::constant(0.5, n, a, b);

  const std::string bt = "(" + beta.expression().to_string() + ")";
  const std::string shift = "(t - " + num(a) + ")";
  const std::string c = "(gamma(" + bt + " + 3) / (2 * gamma(3) * " + shift + "^(2 + " + bt + ")))";
  const std::string radicand = "(1 + " + c + " * iop^2 - iop)";
  Lagrangian::Partials partials{Expression::constant(0.0), Expression::constant(0.0), Expression::constant(0.0),
                                Expression::parse("(2 * " + c + " * iop - 1) / (2 * sqrt" + radicand + ")")};
  Lagrangian lagrangian(Expression::parse("sqrt" + radicand), std::move(partials), std::nullopt, a, b);

  nlohmann::json meta = {{"example", 1},
                         {"beta", beta.expression().to_string()},
                         {"alpha", "0.5 (placeholder; the Lagrangian has no Caputo slot)"},
                         {"extremal", "(t - a)^2"}};
  return VariationalProblem{a, b, 0.0, (b - a) * (b - a), std::move(alpha), std::move(beta), std::move(lagrangian),
                            get_points(params), std::move(meta)};
}

// F = dcap^2 + (iop - xi (t - a)^beta / Gamma(beta + 1))^2; y = xi is a
// minimizer because both squares vanish there.
VariationalProblem example_two(const nlohmann::json& params) {
  const double a = get_number(params, "a", 0.0);
  const double b = get_number(params, "b", 1.0);
  if (!params.contains("xi")) throw ConfigError("example parameter 'xi' is required");
  const double xi = get_number(params, "xi", 0.0);
  const int n = get_n(params, 3);
  OrderFunction alpha = required_order(params, "alpha", n, a, b);
  OrderFunction beta = required_order(params, "beta", n, a, b);
  if (beta.kind() == OrderKind::bivariate) throw ConfigError("example 2 needs an order beta that depends on t only");

  const std::string bt = "(" + beta.expression().to_string() + ")";
  const std::string ref = "(xi * (t - " + num(a) + ")^" + bt + " / gamma(" + bt + " + 1))";
  Lagrangian::Partials partials{Expression::constant(0.0), Expression::constant(0.0), Expression::parse("2 * dcap"),
                                Expression::parse("2 * (iop - " + ref + ")")};
  Lagrangian lagrangian(Expression::parse("dcap^2 + (iop - " + ref + ")^2"), std::move(partials), xi, a, b);

  nlohmann::json meta = {{"example", 2},
                         {"xi", xi},
                         {"alpha", alpha.expression().to_string()},
                         {"beta", beta.expression().to_string()},
                         {"reference_term", "xi (t - a)^beta(t) / Gamma(beta(t) + 1)"},
                         {"extremal", "y = xi"}};
  return VariationalProblem{a, b, xi, xi, std::move(alpha), std::move(beta), std::move(lagrangian),
                            get_points(params), std::move(meta)};
}

}  // namespace

OrderFunction order_from_json(const nlohmann::json& entry, std::string_view name, int default_n, double a, double b) {
  const std::string key(name);
  std::string source;
  std::optional<std::pair<double, double>> range;
  int margin = default_n;
  if (entry.is_string()) {
    source = entry.get<std::string>();
  } else if (entry.is_number()) {
    source = num(entry.get<double>());
  } else if (entry.is_object() && entry.contains("expr") && entry.at("expr").is_string()) {
    source = entry.at("expr").get<std::string>();
    if (entry.contains("range")) {
      const auto& r = entry.at("range");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        throw ConfigError("order '" + key + "': range must be [lo, hi]");
      }
      range = std::make_pair(r[0].get<double>(), r[1].get<double>());
    }
    if (entry.contains("n")) {
      if (!entry.at("n").is_number_integer()) throw ConfigError("order '" + key + "': n must be an integer");
      margin = entry.at("n").get<int>();
    }
  } else {
    throw ConfigError("order '" + key + "' must be an expression string or {\"expr\", \"range\", \"n\"}");
  }
  Expression expr = Expression::parse(source);
  if (!range) {
    if (!expr.is_constant()) {
      throw ConfigError("order '" + key + "' is not constant; its range [lo, hi] is required");
    }
    const double v = expr.evaluate(Bindings{});
    range = std::make_pair(v, v);
  }
  return OrderFunction(std::move(expr), range->first, range->second, margin, a, b);
}

VariationalProblem example_problem(int id, const nlohmann::json& params) {
  if (!params.is_object()) throw ConfigError("example parameters must be a JSON object");
  switch (id) {
    case 1: return example_one(params);
    case 2: return example_two(params);
    default: throw ConfigError("unknown example id " + std::to_string(id) + " (expected 1 or 2)");
  }
}

nlohmann::json example_defaults(int id) {
  switch (id) {
    case 1:
      return {{"a", 0.0}, {"b", 1.0}, {"n", 5}, {"mesh_points", 201},
              {"beta", {{"expr", "(t + 1) / 4"}, {"range", {0.25, 0.5}}}}};
    case 2:
      return {{"a", 0.0}, {"b", 1.0}, {"n", 3}, {"mesh_points", 201}, {"xi", 2.0}, {"alpha", "0.3"}, {"beta", "0.5"}};
    default: throw ConfigError("unknown example id " + std::to_string(id) + " (expected 1 or 2)");
  }
}

}  // namespace varfrac
