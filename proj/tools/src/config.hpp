#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "varfrac/quadrature.hpp"
#include "varfrac/variational.hpp"

namespace varfrac::cli {

enum class Format { json, csv };

/// A run configuration: one JSON document.
///
///   {
///     "interval": {"a": 0, "b": 1},
///     "mesh_size": 201,
///     "quadrature": {"panels": 16, "grading": 1, "tolerance": 1e-10, "max_refinements": 10},
///     "orders": {"alpha": {"expr": "0.3", "range": [0.3, 0.3], "n": 3}, "beta": {...}},
///     "lagrangian": {"f": "...", "partials": {"y": "...", "yp": "...", "dcap": "...", "iop": "..."}},
///     "xi": 2,
///     "boundary": {"ya": 2, "yb": 2},
///     "seed": 0,
///     "output": {"format": "json", "path": "out.json"},
///     "op": {...}, "residual": {...}, "minimize": {...}, "verify": {...}
///   }
///
/// Every field is optional at load time; commands ask for what they need.
struct RunConfig {
  nlohmann::json document = nlohmann::json::object();
  double a = 0.0;
  double b = 1.0;
  std::size_t mesh_size = 201;
  QuadratureSpec quadrature;
  std::uint64_t seed = 0;
  Format format = Format::json;
  std::optional<std::string> output_path;

  /// Section of the document, or an empty object.
  const nlohmann::json& section(const char* name) const;

  /// Named order ("alpha" or "beta"); ConfigError if absent.
  OrderFunction order(const char* name) const;
  bool has_order(const char* name) const;

  /// Full variational problem; ConfigError naming the first missing field,
  /// PreconditionError naming the violated order hypothesis.
  VariationalProblem problem() const;
};

/// Validates the document and fills in defaults.
RunConfig parse_config(const nlohmann::json& document);

/// Reads and parses a config file. JSON syntax errors raise ParseError with
/// the line and column in the file.
RunConfig load_config(const std::string& path);

/// The shipped configuration of a built-in example (1 or 2); the problem it
/// describes is example_problem(id, example_defaults(id)).
nlohmann::json example_config(int id);

}  // namespace varfrac::cli
