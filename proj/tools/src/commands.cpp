#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "varfrac/errors.hpp"
#include "varfrac/gamma.hpp"
#include "varfrac/identity_checks.hpp"
#include "varfrac/operators.hpp"

namespace varfrac::cli {
namespace {

constexpr std::size_t kGammaGridPoints = 1000;
constexpr double kGammaSlack = 1e-12;

std::optional<std::string> string_field(const nlohmann::json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj.at(key).is_string()) throw ConfigError(std::string(where) + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

template <class T>
std::optional<T> number_field(const nlohmann::json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) return std::nullopt;
  const auto& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError(std::string(where) + "." + key + " must be a positive integer");
    }
  } else if (!v.is_number()) {
    throw ConfigError(std::string(where) + "." + key + " must be a number");
  }
  return v.get<T>();
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Expression input_expression(const std::string& source, const char* what) {
  Expression e = Expression::parse(source);
  VariableSet only_t;
  only_t.insert(Variable::t);
  if (!e.free_variables().subset_of(only_t)) {
    throw ConfigError(std::string(what) + " may only use the variable t");
  }
  return e;
}

GridFunction sample_expression(const Mesh& mesh, const Expression& e) {
  return GridFunction::sample(mesh, [&](double t) { return e.evaluate(Bindings().set(Variable::t, t)); });
}

nlohmann::json order_json(const OrderFunction& o) {
  return {{"expr", o.expression().to_string()},
          {"kind", std::string(order_kind_name(o.kind()))},
          {"range", {o.range_lo(), o.range_hi()}},
          {"n", o.margin_n()}};
}

CommandResult verify_gamma_bounds() {
  CommandResult r;
  r.csv = "x,lower,gamma,upper,passed\n";
  nlohmann::json cases = nlohmann::json::array();
  std::size_t failures = 0;
  for (std::size_t k = 0; k < kGammaGridPoints; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(kGammaGridPoints - 1);
    const GammaBounds gb = gamma_bounds(x);
    const double g = gamma(x + 1.0);
    const bool ok = gb.contains(g, kGammaSlack);
    if (!ok) ++failures;
    cases.push_back({{"x", x}, {"lower", gb.lower}, {"gamma", g}, {"upper", gb.upper}, {"passed", ok}});
    r.csv += csv_number(x) + ',' + csv_number(gb.lower) + ',' + csv_number(g) + ',' + csv_number(gb.upper) + ',' +
             (ok ? "true" : "false") + '\n';
  }
  r.json = {{"check", "gamma_bounds"}, {"passed", failures == 0}, {"cases", kGammaGridPoints},
            {"failures", failures},    {"slack", kGammaSlack},     {"results", cases}};
  r.status = failures == 0 ? kOk : kIdentityFailure;
  return r;
}

CommandResult verify_norm_bound(const RunConfig& config, std::size_t trials) {
  std::vector<OrderFunction> orders;
  orders.push_back(OrderFunction::parse("0.75", 0.75, 0.75, 2, config.a, config.b));
  orders.push_back(
      OrderFunction::parse("0.55 + 0.2*sin(t)^2 + 0.2*cos(tau)^2", 0.55, 0.95, 2, config.a, config.b));
  if (config.has_order("beta")) orders.push_back(config.order("beta"));

  CommandResult r;
  r.csv = "order,trial,ratio,bound,passed\n";
  nlohmann::json results = nlohmann::json::array();
  bool all = true;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const OrderFunction& o = orders[k];
    const std::uint64_t seed = config.seed + k;
    const NormRatioResult nr = norm_ratio_trials(o, trials, seed, config.quadrature);
    const bool ok = nr.violations == 0;
    all = all && ok;
    results.push_back({{"order", order_json(o)},
                       {"interval", {o.a(), o.b()}},
                       {"seed", seed},
                       {"trials", trials},
                       {"rejected", nr.rejected},
                       {"bound", nr.bound},
                       {"max_ratio", nr.max_ratio},
                       {"violations", nr.violations},
                       {"passed", ok},
                       {"ratios", nr.ratios}});
    for (std::size_t i = 0; i < nr.ratios.size(); ++i) {
      r.csv += csv_text(o.expression().to_string()) + ',' + std::to_string(i) + ',' + csv_number(nr.ratios[i]) + ',' +
               csv_number(nr.bound) + ',' + (nr.ratios[i] < nr.bound ? "true" : "false") + '\n';
    }
  }
  r.json = {{"check", "norm_bound"}, {"passed", all}, {"results", results}};
  r.status = all ? kOk : kIdentityFailure;
  return r;
}

CommandResult verify_ibp(const RunConfig& config, bool caputo) {
  const std::vector<IdentityReport> reports = run_ibp_family(caputo, config.quadrature);
  CommandResult r;
  r.csv = "order,f,g,lhs,rhs,abs_gap,tolerance,passed\n";
  std::size_t failures = 0;
  double max_gap = 0.0;
  nlohmann::json list = nlohmann::json::array();
  for (const IdentityReport& rep : reports) {
    if (!rep.passed) ++failures;
    max_gap = std::max(max_gap, rep.abs_gap);
    list.push_back(rep);
    r.csv += csv_text(rep.metadata.at("order").get<std::string>()) + ',' +
             csv_text(rep.metadata.at("f").get<std::string>()) + ',' +
             csv_text(rep.metadata.at("g").get<std::string>()) + ',' + csv_number(rep.lhs) + ',' +
             csv_number(rep.rhs) + ',' + csv_number(rep.abs_gap) + ',' + csv_number(rep.tolerance) + ',' +
             (rep.passed ? "true" : "false") + '\n';
  }
  r.json = {{"check", caputo ? "ibp_caputo" : "ibp_integrals"},
            {"passed", failures == 0},
            {"cases", reports.size()},
            {"failures", failures},
            {"max_gap", max_gap},
            {"reports", list}};
  r.status = failures == 0 ? kOk : kIdentityFailure;
  return r;
}

RitzOptions ritz_options(const nlohmann::json& section, const MinimizeArgs& args) {
  RitzOptions o;
  if (auto v = number_field<double>(section, "opt_tol", "minimize")) o.opt_tol = *v;
  if (auto v = number_field<std::size_t>(section, "max_iters", "minimize")) o.max_iters = *v;
  if (args.opt_tol) o.opt_tol = *args.opt_tol;
  if (args.max_iters) o.max_iters = *args.max_iters;
  if (!(o.opt_tol > 0.0)) throw ConfigError("opt_tol must be positive");
  return o;
}

std::size_t basis_count(const nlohmann::json& section, const MinimizeArgs& args) {
  std::size_t k = number_field<std::size_t>(section, "basis", "minimize").value_or(5);
  if (args.basis) k = *args.basis;
  if (k < 1) throw ConfigError("basis must be >= 1");
  return k;
}

}  // namespace

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CommandResult cmd_op(const RunConfig& config, const OpArgs& args) {
  const nlohmann::json& sec = config.section("op");
  const std::string which = args.which ? *args.which : string_field(sec, "which", "op").value_or("");
  const auto kind = operator_from_name(which);
  if (!kind) {
    throw ConfigError("op: unknown operator '" + which +
                      "' (expected left_integral, right_integral, left_rl_derivative, right_rl_derivative, "
                      "left_caputo or right_caputo)");
  }
  const auto input_src = args.input ? args.input : string_field(sec, "input", "op");
  if (!input_src) throw ConfigError("op: an input function is required (--input or op.input)");
  std::vector<double> at = args.at;
  if (at.empty() && sec.contains("at")) {
    const auto& arr = sec.at("at");
    if (!arr.is_array()) throw ConfigError("op.at must be an array of numbers");
    for (const auto& v : arr) {
      if (!v.is_number()) throw ConfigError("op.at must be an array of numbers");
      at.push_back(v.get<double>());
    }
  }
  if (at.empty()) throw ConfigError("op: at least one evaluation point is required (--at or op.at)");
  const std::string order_name = args.order ? *args.order : string_field(sec, "order", "op").value_or("alpha");
  if (order_name != "alpha" && order_name != "beta") throw ConfigError("op.order must be alpha or beta");

  const OrderFunction order = config.order(order_name.c_str());
  const Mesh mesh(config.a, config.b, config.mesh_size);
  const Expression input = input_expression(*input_src, "op input");
  const GridFunction f = sample_expression(mesh, input);

  CommandResult r;
  r.csv = "t,value\n";
  nlohmann::json rows = nlohmann::json::array();
  for (double t : at) {
    const double v = apply_operator(*kind, f, order, t, config.quadrature);
    rows.push_back({{"t", t}, {"value", v}});
    r.csv += csv_number(t) + ',' + csv_number(v) + '\n';
  }
  r.json = {{"operator", which},
            {"input", input.to_string()},
            {"order", order_json(order)},
            {"interval", {config.a, config.b}},
            {"mesh_size", config.mesh_size},
            {"rows", rows}};
  return r;
}

CommandResult cmd_verify(const RunConfig& config, const VerifyArgs& args) {
  const nlohmann::json& sec = config.section("verify");
  const std::string which = args.which ? *args.which : string_field(sec, "which", "verify").value_or("");
  std::size_t trials = number_field<std::size_t>(sec, "trials", "verify").value_or(100);
  if (args.trials) trials = *args.trials;
  if (which == "gamma_bounds") return verify_gamma_bounds();
  if (which == "norm_bound") return verify_norm_bound(config, trials);
  if (which == "ibp_integrals") return verify_ibp(config, false);
  if (which == "ibp_caputo") return verify_ibp(config, true);
  throw ConfigError("verify: unknown check '" + which +
                    "' (expected gamma_bounds, norm_bound, ibp_integrals or ibp_caputo)");
}

CommandResult cmd_residual(const RunConfig& config, const ResidualArgs& args) {
  const auto y_src = args.y ? args.y : string_field(config.section("residual"), "y", "residual");
  if (!y_src) throw ConfigError("residual: a candidate function is required (--y or residual.y)");
  const VariationalProblem problem = config.problem();
  const Expression y = input_expression(*y_src, "residual candidate");
  const ELReport report = el_residual(problem, sample_expression(problem.mesh(), y), config.quadrature);
  CommandResult r;
  r.json = report;
  r.json["candidate"] = y.to_string();
  r.csv = to_csv(report);
  return r;
}

CommandResult cmd_minimize(const RunConfig& config, const MinimizeArgs& args) {
  const nlohmann::json& sec = config.section("minimize");
  const VariationalProblem problem = config.problem();
  const RitzSolution sol = ritz_minimize(problem, basis_count(sec, args), config.quadrature, ritz_options(sec, args));
  CommandResult r;
  r.json = sol;
  r.csv = to_csv(sol);
  r.status = sol.converged() ? kOk : kOptimizerFailure;
  return r;
}

CommandResult cmd_example(int id, const MinimizeArgs& args) {
  const nlohmann::json doc = example_config(id);
  const RunConfig config = parse_config(doc);
  const VariationalProblem problem = example_problem(id, example_defaults(id));
  const DiscreteProblem discrete(problem, config.quadrature);

  const Expression y = input_expression(doc.at("residual").at("y").get<std::string>(), "extremal");
  const GridFunction ys = sample_expression(discrete.mesh(), y);
  const double j_ext = discrete.functional(ys.values());
  const ELReport residual = discrete.residual(ys.values());
  const nlohmann::json& sec = config.section("minimize");
  const RitzSolution sol = ritz_minimize(discrete, basis_count(sec, args), ritz_options(sec, args));

  CommandResult r;
  r.json = {{"example", id},
            {"problem", problem.metadata},
            {"extremal", {{"y", y.to_string()}, {"functional", j_ext}, {"residual", residual}}},
            {"ritz", sol},
            {"functional_gap", sol.functional - j_ext}};
  r.csv = "t,y_extremal,y_ritz\n";
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    r.csv += csv_number(sol.t[i]) + ',' + csv_number(ys[i]) + ',' + csv_number(sol.y[i]) + '\n';
  }
  r.status = sol.converged() ? kOk : kOptimizerFailure;
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-order fractional calculus toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format_flag;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Run configuration (JSON)");
  app.add_option("--out", out_path, "Output file (default: output.path, else stdout)");
  app.add_option("--format", format_flag, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "Random seed (overrides the config)");

  OpArgs op_args;
  auto* op = app.add_subcommand("op", "Evaluate one of the six operators of an input function");
  op->add_option("--which", op_args.which, "Operator name");
  op->add_option("--input", op_args.input, "Input function of t");
  op->add_option("--at", op_args.at, "Evaluation points")->delimiter(',');
  op->add_option("--order", op_args.order, "Order to use (alpha or beta)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run a built-in identity check");
  verify->add_option("--which", verify_args.which, "gamma_bounds, norm_bound, ibp_integrals or ibp_caputo");
  verify->add_option("--trials", verify_args.trials, "Random trials for norm_bound");

  ResidualArgs residual_args;
  auto* residual = app.add_subcommand("residual", "Euler-Lagrange residual of a candidate function");
  residual->add_option("--y", residual_args.y, "Candidate function of t");

  MinimizeArgs minimize_args;
  auto* minimize = app.add_subcommand("minimize", "Ritz minimization of the functional");
  auto* example = app.add_subcommand("example", "Run a built-in example problem");
  int example_id = 0;
  example->add_option("--id", example_id, "Example id")->required()->check(CLI::IsMember({1, 2}));
  for (auto* sub : {minimize, example}) {
    sub->add_option("--basis", minimize_args.basis, "Number of sine modes");
    sub->add_option("--opt-tol", minimize_args.opt_tol, "Stationarity tolerance");
    sub->add_option("--max-iters", minimize_args.max_iters, "Iteration limit");
  }

  bool json_mode = true;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }
  if (format_flag) json_mode = *format_flag == "json";

  auto report_error = [&](const std::string& kind, const std::string& message, std::optional<int> line,
                          std::optional<int> column) {
    if (json_mode) {
      nlohmann::json e = {{"error", kind}, {"message", message}};
      if (line) e["line"] = *line;
      if (column) e["column"] = *column;
      err << e.dump() << '\n';
    } else {
      err << "error (" << kind << "): " << message << '\n';
    }
  };

  try {
    RunConfig config;
    if (config_path) config = load_config(*config_path);
    if (!format_flag) json_mode = config.format == Format::json;
    if (seed) config.seed = *seed;

    CommandResult result;
    if (op->parsed()) {
      result = cmd_op(config, op_args);
    } else if (verify->parsed()) {
      result = cmd_verify(config, verify_args);
    } else if (residual->parsed()) {
      result = cmd_residual(config, residual_args);
    } else if (minimize->parsed()) {
      result = cmd_minimize(config, minimize_args);
    } else {
      result = cmd_example(example_id, minimize_args);
    }

    const std::string text = json_mode ? result.json.dump(2) + "\n" : result.csv;
    const std::optional<std::string> path = out_path ? out_path : config.output_path;
    if (path) {
      std::ofstream file(*path, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file '" + *path + "'");
      file << text;
    } else {
      out << text;
    }
    return result.status;
  } catch (const ParseError& e) {
    report_error("parse", e.message(), e.line(), e.column());
    return kConfigError;
  } catch (const ConvergenceError& e) {
    report_error("convergence", e.what(), std::nullopt, std::nullopt);
    return kQuadratureFailure;
  } catch (const PreconditionError& e) {
    report_error("precondition", e.what(), std::nullopt, std::nullopt);
    return kConfigError;
  } catch (const ConfigError& e) {
    report_error("config", e.what(), std::nullopt, std::nullopt);
    return kConfigError;
  } catch (const DomainError& e) {
    report_error("domain", e.what(), std::nullopt, std::nullopt);
    return kConfigError;
  } catch (const EvaluationError& e) {
    report_error("evaluation", e.what(), std::nullopt, std::nullopt);
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    report_error("config", e.what(), std::nullopt, std::nullopt);
    return kConfigError;
  }
}

}  // namespace varfrac::cli
