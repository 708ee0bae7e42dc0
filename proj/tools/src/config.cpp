#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "varfrac/errors.hpp"

namespace varfrac::cli {
namespace {

const std::set<std::string> kTopLevelKeys = {"description", "interval", "mesh_size", "quadrature", "orders",
                                             "lagrangian",  "xi",       "boundary",  "seed",       "output",
                                             "op",          "residual", "minimize",  "verify"};

const nlohmann::json& empty_object() {
  static const nlohmann::json empty = nlohmann::json::object();
  return empty;
}

double number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

template <class T>
T integer(const nlohmann::json& obj, const char* key, const std::string& where, T fallback, long long min_value) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < min_value) {
    throw ConfigError(where + "." + key + " must be an integer >= " + std::to_string(min_value));
  }
  return v.get<T>();
}

const nlohmann::json& object(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return empty_object();
  const auto& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(where + key + " must be an object");
  return v;
}

Expression expression(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be an expression string");
  try {
    return Expression::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(where + "." + key + ": " + e.message(), e.line(), e.column(), e.expected());
  }
}

nlohmann::json order_entry(const OrderFunction& o) {
  return {{"expr", o.expression().to_string()}, {"range", {o.range_lo(), o.range_hi()}}, {"n", o.margin_n()}};
}

}  // namespace

const nlohmann::json& RunConfig::section(const char* name) const {
  return object(document, name, "");
}

bool RunConfig::has_order(const char* name) const {
  return section("orders").contains(name);
}

OrderFunction RunConfig::order(const char* name) const {
  const nlohmann::json& orders = section("orders");
  if (!orders.contains(name)) throw ConfigError(std::string("orders.") + name + " is required");
  try {
    return order_from_json(orders.at(name), name, 2, a, b);
  } catch (const ParseError& e) {
    throw ParseError(std::string("orders.") + name + ": " + e.message(), e.line(), e.column(), e.expected());
  }
}

VariationalProblem RunConfig::problem() const {
  OrderFunction alpha = order("alpha");
  OrderFunction beta = order("beta");
  const nlohmann::json& lag = section("lagrangian");
  if (lag.empty()) throw ConfigError("lagrangian is required");
  Expression f = expression(lag, "f", "lagrangian");
  std::optional<Lagrangian::Partials> partials;
  if (lag.contains("partials")) {
    const auto& p = lag.at("partials");
    if (!p.is_object()) throw ConfigError("lagrangian.partials must be an object");
    partials = Lagrangian::Partials{expression(p, "y", "lagrangian.partials"), expression(p, "yp", "lagrangian.partials"),
                                    expression(p, "dcap", "lagrangian.partials"),
                                    expression(p, "iop", "lagrangian.partials")};
  }
  std::optional<double> xi;
  if (document.contains("xi")) xi = number(document, "xi", "config");
  Lagrangian lagrangian(std::move(f), std::move(partials), xi, a, b);

  const nlohmann::json& bnd = section("boundary");
  if (bnd.empty()) throw ConfigError("boundary is required");
  VariationalProblem p{a,
                       b,
                       number(bnd, "ya", "boundary"),
                       number(bnd, "yb", "boundary"),
                       std::move(alpha),
                       std::move(beta),
                       std::move(lagrangian),
                       mesh_size,
                       {{"source", "config"}}};
  if (xi) p.metadata["xi"] = *xi;
  p.validate();
  return p;
}

RunConfig parse_config(const nlohmann::json& document) {
  if (!document.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : document.items()) {
    if (!kTopLevelKeys.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  RunConfig c;
  c.document = document;

  const nlohmann::json& interval = object(document, "interval", "");
  if (!interval.empty()) {
    c.a = number(interval, "a", "interval");
    c.b = number(interval, "b", "interval");
  }
  if (!(c.a < c.b)) throw ConfigError("interval must satisfy a < b");
  c.mesh_size = integer<std::size_t>(document, "mesh_size", "config", 201, 5);

  const nlohmann::json& q = object(document, "quadrature", "");
  if (q.contains("panels")) c.quadrature.panels = integer<int>(q, "panels", "quadrature", 16, 4);
  if (q.contains("grading")) c.quadrature.grading = number(q, "grading", "quadrature");
  if (q.contains("tolerance")) c.quadrature.tolerance = number(q, "tolerance", "quadrature");
  if (q.contains("max_refinements")) {
    c.quadrature.max_refinements = integer<int>(q, "max_refinements", "quadrature", 10, 1);
  }
  try {
    c.quadrature.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  c.seed = integer<std::uint64_t>(document, "seed", "config", 0, 0);

  const nlohmann::json& out = object(document, "output", "");
  if (out.contains("format")) {
    const auto& f = out.at("format");
    if (f == "json") {
      c.format = Format::json;
    } else if (f == "csv") {
      c.format = Format::csv;
    } else {
      throw ConfigError("output.format must be \"json\" or \"csv\"");
    }
  }
  if (out.contains("path")) {
    if (!out.at("path").is_string()) throw ConfigError("output.path must be a string");
    c.output_path = out.at("path").get<std::string>();
  }

  const nlohmann::json& orders = object(document, "orders", "");
  for (const auto& [key, value] : orders.items()) {
    if (key != "alpha" && key != "beta") throw ConfigError("unknown order '" + key + "' (expected alpha or beta)");
    c.order(key.c_str());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(path + ": " + what, line, column);
  }
  return parse_config(doc);
}

nlohmann::json example_config(int id) {
  const VariationalProblem p = example_problem(id, example_defaults(id));
  const QuadratureSpec q;
  const auto& partials = *p.lagrangian.partials();
  nlohmann::json doc = {
      {"description", id == 1 ? "Built-in example 1: extremal (t - a)^2, beta(t) = (t + 1) / 4"
                              : "Built-in example 2: constant minimizer y = xi"},
      {"interval", {{"a", p.a}, {"b", p.b}}},
      {"mesh_size", p.mesh_points},
      {"quadrature",
       {{"panels", q.panels}, {"grading", q.grading}, {"tolerance", q.tolerance}, {"max_refinements", q.max_refinements}}},
      {"orders", {{"alpha", order_entry(p.alpha)}, {"beta", order_entry(p.beta)}}},
      {"lagrangian",
       {{"f", p.lagrangian.expression().to_string()},
        {"partials",
         {{"y", partials.dy.to_string()},
          {"yp", partials.dyp.to_string()},
          {"dcap", partials.ddcap.to_string()},
          {"iop", partials.diop.to_string()}}}}},
      {"boundary", {{"ya", p.ya}, {"yb", p.yb}}},
      {"seed", 0},
      {"output", {{"format", "json"}}}};
  if (p.lagrangian.xi()) doc["xi"] = *p.lagrangian.xi();
  const RitzOptions ritz;
  if (id == 1) {
    doc["residual"] = {{"y", Expression::parse("(t - " + nlohmann::json(p.a).dump() + ")^2").to_string()}};
    doc["minimize"] = {{"basis", 8}, {"opt_tol", ritz.opt_tol}, {"max_iters", ritz.max_iters}};
  } else {
    doc["residual"] = {{"y", Expression::constant(p.ya).to_string()}};
    doc["minimize"] = {{"basis", 5}, {"opt_tol", ritz.opt_tol}, {"max_iters", ritz.max_iters}};
  }
  return doc;
}

}  // namespace varfrac::cli
