#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace varfrac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition or theorem hypothesis does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not meet its tolerance within the refinement budget.
/// Carries the last two estimates so callers can judge how far off it was.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double current)
      : Error(what), previous_(previous), current_(current) {}

  double previous() const noexcept { return previous_; }
  double current() const noexcept { return current_; }

 private:
  double previous_;
  double current_;
};

/// Syntax or name-resolution failure while parsing an expression.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column,
             std::vector<std::string> expected = {})
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        message_(message),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::string message_;
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Run-time failure while evaluating an expression (domain violation,
/// division by zero, missing binding).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace varfrac
