#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace varfrac::cli {

enum ExitCode : int {
  kOk = 0,
  kIdentityFailure = 1,
  kConfigError = 2,
  kQuadratureFailure = 3,
  kOptimizerFailure = 4,
};

/// Output of one command in both serializations.
struct CommandResult {
  nlohmann::json json;
  std::string csv;
  int status = kOk;
};

struct OpArgs {
  std::optional<std::string> which;
  std::optional<std::string> input;
  std::vector<double> at;
  std::optional<std::string> order;
};

struct VerifyArgs {
  std::optional<std::string> which;
  std::optional<std::size_t> trials;
};

struct ResidualArgs {
  std::optional<std::string> y;
};

struct MinimizeArgs {
  std::optional<std::size_t> basis;
  std::optional<double> opt_tol;
  std::optional<std::size_t> max_iters;
};

CommandResult cmd_op(const RunConfig& config, const OpArgs& args);
CommandResult cmd_verify(const RunConfig& config, const VerifyArgs& args);
CommandResult cmd_residual(const RunConfig& config, const ResidualArgs& args);
CommandResult cmd_minimize(const RunConfig& config, const MinimizeArgs& args);
CommandResult cmd_example(int id, const MinimizeArgs& args);

/// Formats a double with 17 significant digits.
std::string csv_number(double x);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varfrac::cli
