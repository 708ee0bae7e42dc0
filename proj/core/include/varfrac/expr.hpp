#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace varfrac {

/// The fixed set of names an expression may refer to. `y`, `yp`, `dcap` and
/// `iop` are the Lagrangian slots (value, first derivative, Caputo derivative,
/// fractional integral); `t` and `tau` are the order-function arguments; `xi`
/// is a free problem parameter.
enum class Variable : std::uint8_t { t, tau, y, yp, dcap, iop, xi };

inline constexpr std::size_t kVariableCount = 7;

std::string_view variable_name(Variable v) noexcept;
std::optional<Variable> variable_from_name(std::string_view name) noexcept;

/// Set of variables, stored as a bit mask.
class VariableSet {
 public:
  constexpr VariableSet() = default;

  constexpr void insert(Variable v) noexcept { bits_ |= bit(v); }
  constexpr bool contains(Variable v) const noexcept { return (bits_ & bit(v)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr bool subset_of(VariableSet other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr VariableSet operator|(VariableSet other) const noexcept {
    VariableSet r;
    r.bits_ = bits_ | other.bits_;
    return r;
  }
  constexpr bool operator==(const VariableSet&) const = default;

  std::vector<Variable> to_vector() const;

 private:
  static constexpr std::uint8_t bit(Variable v) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
  }
  std::uint8_t bits_ = 0;
};

/// Values for some subset of the variables.
class Bindings {
 public:
  Bindings() = default;

  Bindings& set(Variable v, double value) noexcept {
    values_[static_cast<std::size_t>(v)] = value;
    bound_.insert(v);
    return *this;
  }
  double get(Variable v) const noexcept { return values_[static_cast<std::size_t>(v)]; }
  bool has(Variable v) const noexcept { return bound_.contains(v); }
  VariableSet bound() const noexcept { return bound_; }

 private:
  std::array<double, kVariableCount> values_{};
  VariableSet bound_;
};

enum class Function : std::uint8_t { sin, cos, exp, ln, sqrt, abs, gamma, pow };

std::string_view function_name(Function f) noexcept;

/// Immutable expression tree node.
struct ExprNode {
  enum class Kind : std::uint8_t { number, variable, negate, add, sub, mul, div, power, call };

  Kind kind = Kind::number;
  double number = 0.0;
  Variable variable = Variable::t;
  Function function = Function::sin;
  std::vector<std::shared_ptr<const ExprNode>> children;
};

bool structurally_equal(const ExprNode& lhs, const ExprNode& rhs) noexcept;

/// A parsed, immutable arithmetic expression over the fixed variable set.
///
/// Grammar (whitespace-insensitive):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | variable | name '(' args ')' | '(' expr ')'
///
/// Unary minus binds looser than '^', so "-2^2" is -4. Functions are sin,
/// cos, exp, ln, sqrt, abs, gamma (one argument) and pow (two).
///
/// Expressions are cheap to copy and safe to evaluate concurrently.
class Expression {
 public:
  /// Throws ParseError with a 1-based column and the expected-token set.
  static Expression parse(std::string_view source);

  static Expression constant(double value);

  /// Throws EvaluationError on a missing binding, division by zero, a domain
  /// violation of ln/sqrt/pow/gamma, or a non-finite result. The message names
  /// the offending subexpression.
  double evaluate(const Bindings& bindings) const;

  /// Fully parenthesized canonical text; parsing it yields an equal tree.
  std::string to_string() const;

  VariableSet free_variables() const noexcept { return free_; }
  bool is_constant() const noexcept { return free_.empty(); }
  const ExprNode& root() const noexcept { return *root_; }

  friend bool operator==(const Expression& lhs, const Expression& rhs) noexcept {
    return structurally_equal(*lhs.root_, *rhs.root_);
  }

 private:
  struct Instruction {
    ExprNode::Kind kind;
    Function function;
    Variable variable;
    double number;
    const ExprNode* node;
  };

  explicit Expression(std::shared_ptr<const ExprNode> root);
  void compile(const ExprNode& node, int depth);

  std::shared_ptr<const ExprNode> root_;
  std::vector<Instruction> program_;
  int max_stack_ = 0;
  VariableSet free_;
};

std::string to_string(const ExprNode& node);

}  // namespace varfrac
