#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "varfrac/grid_function.hpp"
#include "varfrac/operators.hpp"
#include "varfrac/order_function.hpp"
#include "varfrac/quadrature.hpp"

namespace varfrac {

/// Outcome of one numerical identity check; passed <=> abs_gap <= tolerance.
struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  nlohmann::json metadata = nlohmann::json::object();
};

IdentityReport make_report(double lhs, double rhs, double tolerance, nlohmann::json metadata = nlohmann::json::object());

/// {"lhs", "rhs", "abs_gap", "tolerance", "passed", "metadata"}.
void to_json(nlohmann::json& j, const IdentityReport& r);

/// Gap tolerance used when the caller does not pass one: max(1e-4, 10 * spec.tolerance).
double default_ibp_tolerance(const QuadratureSpec& spec) noexcept;

/// Ratio ||I f||_1 / ||f||_1 of the left integral on the L1 norm, both norms by
/// composite Simpson on the mesh of f.
double l1_norm_ratio(const GridFunction& f, const OrderFunction& order, const QuadratureSpec& spec);

struct NormRatioOptions {
  std::size_t mesh_points = 401;
  std::size_t knots = 16;       ///< equispaced knots of the random piecewise-linear f
  double min_l1_norm = 1e-6;    ///< draws with a smaller norm are rejected and redrawn
};

struct NormRatioResult {
  double max_ratio = 0.0;
  double bound = 0.0;  ///< n + b - a
  std::vector<double> ratios;
  std::size_t violations = 0;
  std::size_t rejected = 0;
};

/// Draws `trials` seeded random piecewise-linear functions on the order's
/// interval (knot values uniform in [-1, 1]) and measures the L1 norm ratio of
/// the left integral for each. Throws PreconditionError if the order violates
/// 1/n < order.
NormRatioResult norm_ratio_trials(const OrderFunction& order, std::size_t trials, std::uint64_t seed,
                                  const QuadratureSpec& spec, const NormRatioOptions& options = {});

/// Maximum ratio over the batch.
double estimate_norm_ratio(const OrderFunction& order, std::size_t trials, std::uint64_t seed,
                           const QuadratureSpec& spec);

/// Checks the integration-by-parts identities for one order on one mesh,
/// assembling the operator matrices once for any number of (f, g) pairs.
class IbpHarness {
 public:
  /// `caputo` selects whether the Caputo identity will be checked (the order
  /// must then satisfy order < 1 - 1/n) or the integral identity (1/n < order).
  IbpHarness(const Mesh& mesh, const OrderFunction& order, const QuadratureSpec& spec, bool caputo);

  /// lhs = int g * (left integral of f), rhs = int f * (right integral of g).
  IdentityReport integrals(const GridFunction& f, const GridFunction& g,
                           std::optional<double> tolerance = std::nullopt) const;

  /// lhs = int g * (left Caputo of f);
  /// rhs = [f * (right integral of order 1 - alpha of g)]_a^b + int f * (right RL derivative of g).
  /// The right RL derivative is singular at b; the outer integral uses Simpson
  /// up to `kBoundaryLayer` cells before b and integrates the last layer by
  /// parts against the (continuous) right integral.
  IdentityReport caputo(const GridFunction& f, const GridFunction& g,
                        std::optional<double> tolerance = std::nullopt) const;

  static constexpr std::size_t kBoundaryLayer = 8;

 private:
  void check_mesh(const GridFunction& f, const GridFunction& g) const;
  nlohmann::json metadata(const char* check) const;

  Mesh mesh_;
  OrderFunction order_;
  QuadratureSpec spec_;
  bool caputo_;
  OperatorMatrix left_;   // left integral (direct) or left Caputo
  OperatorMatrix right_;  // right integral (direct) or right integral of order 1 - alpha
};

/// Named smooth test function.
struct TestFunction {
  std::string name;
  std::function<double(double)> fn;
};

/// {1, t, t^2, sin t, cos t}.
const std::vector<TestFunction>& smooth_family();

/// Order of a built-in family with its certified interval.
struct FamilyOrder {
  std::string expr;
  double range_lo;
  double range_hi;
  int margin_n;
  double a;
  double b;

  OrderFunction build() const;
};

/// Three orders each (constant, t-only, bivariate asymmetric). The integral
/// family lives on [0, 1]; the Caputo family on [0.25, 1.25] so that the
/// boundary term does not vanish for any member of the smooth family.
std::vector<FamilyOrder> builtin_ibp_orders(bool caputo);

/// Runs every (order, f, g) of the built-in family; metadata carries the
/// names of f and g.
std::vector<IdentityReport> run_ibp_family(bool caputo, const QuadratureSpec& spec, std::size_t mesh_points = 401);

IdentityReport verify_ibp_integrals(const GridFunction& f, const GridFunction& g, const OrderFunction& order,
                                    const QuadratureSpec& spec, std::optional<double> tolerance = std::nullopt);

IdentityReport verify_ibp_caputo(const GridFunction& f, const GridFunction& g, const OrderFunction& order,
                                 const QuadratureSpec& spec, std::optional<double> tolerance = std::nullopt);

}  // namespace varfrac
