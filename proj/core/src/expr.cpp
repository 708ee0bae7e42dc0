#include "varfrac/expr.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "varfrac/errors.hpp"
#include "varfrac/gamma.hpp"

namespace varfrac {
namespace {

constexpr std::array<std::string_view, kVariableCount> kVariableNames = {
    "t", "tau", "y", "yp", "dcap", "iop", "xi"};

struct FunctionInfo {
  std::string_view name;
  Function function;
  int arity;
};

constexpr std::array<FunctionInfo, 8> kFunctions = {{
    {"sin", Function::sin, 1},
    {"cos", Function::cos, 1},
    {"exp", Function::exp, 1},
    {"ln", Function::ln, 1},
    {"sqrt", Function::sqrt, 1},
    {"abs", Function::abs, 1},
    {"gamma", Function::gamma, 1},
    {"pow", Function::pow, 2},
}};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& info : kFunctions) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::number;
  n->number = v;
  return n;
}

NodePtr make_variable(Variable v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::variable;
  n->variable = v;
  return n;
}

NodePtr make_op(ExprNode::Kind kind, std::vector<NodePtr> children) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

NodePtr make_call(Function f, std::vector<NodePtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::call;
  n->function = f;
  n->children = std::move(args);
  return n;
}

// Recursive-descent parser over a single source string. Columns are 1-based
// and count bytes; lines advance on '\n'.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) fail("empty expression", {"number", "variable", "function", "'('", "'-'"});
    NodePtr e = expr();
    skip_ws();
    if (!at_end()) {
      fail("unexpected '" + std::string(1, peek()) + "'", {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = make_op(ExprNode::Kind::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make_op(ExprNode::Kind::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = make_op(ExprNode::Kind::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make_op(ExprNode::Kind::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    skip_ws();
    if (accept('-')) return make_op(ExprNode::Kind::negate, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip_ws();
    if (accept('^')) {
      return make_op(ExprNode::Kind::power, {base, unary()});
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of input", {"number", "variable", "function", "'('", "'-'"});
    const char c = peek();
    if (c == '(') {
      advance();
      NodePtr inner = expr();
      skip_ws();
      expect(')', "')'");
      return inner;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) return identifier();
    fail("unexpected '" + std::string(1, c) + "'", {"number", "variable", "function", "'('", "'-'"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    const int col = column_;
    while (!at_end() && (is_digit(peek()) || peek() == '.')) advance();
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      std::size_t save = pos_;
      int save_col = column_;
      advance();
      if (!at_end() && (peek() == '+' || peek() == '-')) advance();
      if (at_end() || !is_digit(peek())) {
        pos_ = save;
        column_ = save_col;
      } else {
        while (!at_end() && is_digit(peek())) advance();
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("malformed number '" + std::string(text) + "'", line_, col, {"number"});
    }
    return make_number(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    const int col = column_;
    while (!at_end() && is_ident_char(peek())) advance();
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    const bool call = !at_end() && peek() == '(';

    if (const FunctionInfo* info = find_function(name)) {
      if (!call) {
        throw ParseError("function '" + std::string(name) + "' requires an argument list", line_, column_, {"'('"});
      }
      advance();
      std::vector<NodePtr> args;
      args.push_back(expr());
      skip_ws();
      while (accept(',')) {
        args.push_back(expr());
        skip_ws();
      }
      expect(')', "')'");
      if (static_cast<int>(args.size()) != info->arity) {
        throw ParseError("function '" + std::string(name) + "' takes " + std::to_string(info->arity) +
                             " argument(s), got " + std::to_string(args.size()),
                         line_, col);
      }
      return make_call(info->function, std::move(args));
    }
    if (auto var = variable_from_name(name)) {
      if (call) {
        throw ParseError("variable '" + std::string(name) + "' is not callable", line_, column_,
                         {"operator", "end of input"});
      }
      return make_variable(*var);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", line_, col,
                     {"t", "tau", "y", "yp", "dcap", "iop", "xi", "function name"});
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(msg, line_, column_, std::move(expected));
  }

  void expect(char c, const char* label) {
    if (!accept(c)) {
      if (at_end()) fail("unexpected end of input", {label});
      fail("unexpected '" + std::string(1, peek()) + "'", {label});
    }
  }

  bool accept(char c) {
    if (!at_end() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) advance();
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

void collect_free(const ExprNode& node, VariableSet& out) {
  if (node.kind == ExprNode::Kind::variable) out.insert(node.variable);
  for (const auto& c : node.children) collect_free(*c, out);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  std::string s(buf, ptr);
  return s;
}

char op_symbol(ExprNode::Kind k) {
  switch (k) {
    case ExprNode::Kind::add: return '+';
    case ExprNode::Kind::sub: return '-';
    case ExprNode::Kind::mul: return '*';
    case ExprNode::Kind::div: return '/';
    case ExprNode::Kind::power: return '^';
    default: return '?';
  }
}

[[noreturn]] void eval_fail(const std::string& what, const ExprNode* node) {
  throw EvaluationError(what + " in '" + to_string(*node) + "'");
}

double apply_call(Function f, double x, double y, const ExprNode* node) {
  switch (f) {
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::exp: return std::exp(x);
    case Function::ln:
      if (!(x > 0.0)) eval_fail("ln of non-positive value " + format_number(x), node);
      return std::log(x);
    case Function::sqrt:
      if (x < 0.0) eval_fail("sqrt of negative value " + format_number(x), node);
      return std::sqrt(x);
    case Function::abs: return std::abs(x);
    case Function::gamma:
      if (!(x > 0.0)) eval_fail("gamma of non-positive value " + format_number(x), node);
      return gamma(x);
    case Function::pow: break;
  }
  // pow
  if (x == 0.0 && y < 0.0) eval_fail("division by zero (zero raised to a negative power)", node);
  if (x < 0.0 && std::trunc(y) != y) eval_fail("negative base " + format_number(x) + " with non-integer exponent", node);
  return std::pow(x, y);
}

}  // namespace

std::string_view variable_name(Variable v) noexcept { return kVariableNames[static_cast<std::size_t>(v)]; }

std::optional<Variable> variable_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kVariableNames.size(); ++i) {
    if (kVariableNames[i] == name) return static_cast<Variable>(i);
  }
  return std::nullopt;
}

std::vector<Variable> VariableSet::to_vector() const {
  std::vector<Variable> out;
  for (std::size_t i = 0; i < kVariableCount; ++i) {
    if (contains(static_cast<Variable>(i))) out.push_back(static_cast<Variable>(i));
  }
  return out;
}

std::string_view function_name(Function f) noexcept {
  for (const auto& info : kFunctions) {
    if (info.function == f) return info.name;
  }
  return "?";
}

bool structurally_equal(const ExprNode& lhs, const ExprNode& rhs) noexcept {
  if (lhs.kind != rhs.kind || lhs.children.size() != rhs.children.size()) return false;
  switch (lhs.kind) {
    case ExprNode::Kind::number:
      if (lhs.number != rhs.number) return false;
      break;
    case ExprNode::Kind::variable:
      if (lhs.variable != rhs.variable) return false;
      break;
    case ExprNode::Kind::call:
      if (lhs.function != rhs.function) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < lhs.children.size(); ++i) {
    if (!structurally_equal(*lhs.children[i], *rhs.children[i])) return false;
  }
  return true;
}

std::string to_string(const ExprNode& node) {
  switch (node.kind) {
    case ExprNode::Kind::number: {
      std::string s = format_number(node.number);
      return node.number < 0.0 ? "(" + s + ")" : s;
    }
    case ExprNode::Kind::variable:
      return std::string(variable_name(node.variable));
    case ExprNode::Kind::negate:
      return "(-" + to_string(*node.children[0]) + ")";
    case ExprNode::Kind::call: {
      std::string s(function_name(node.function));
      s += '(';
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) s += ", ";
        s += to_string(*node.children[i]);
      }
      return s + ')';
    }
    default:
      return "(" + to_string(*node.children[0]) + " " + op_symbol(node.kind) + " " +
             to_string(*node.children[1]) + ")";
  }
}

Expression::Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {
  collect_free(*root_, free_);
  compile(*root_, 0);
}

Expression Expression::parse(std::string_view source) { return Expression(Parser(source).parse()); }

Expression Expression::constant(double value) { return Expression(make_number(value)); }

void Expression::compile(const ExprNode& node, int depth) {
  // Post-order emission; `depth` is the stack height before this node's operands.
  int d = depth;
  for (const auto& c : node.children) {
    compile(*c, d);
    ++d;
  }
  max_stack_ = std::max(max_stack_, std::max(d, depth + 1));
  program_.push_back({node.kind, node.function, node.variable, node.number, &node});
}

double Expression::evaluate(const Bindings& bindings) const {
  constexpr int kFastStack = 32;
  std::array<double, kFastStack> fast{};
  std::vector<double> slow;
  double* stack = fast.data();
  if (max_stack_ > kFastStack) {
    slow.resize(static_cast<std::size_t>(max_stack_));
    stack = slow.data();
  }
  int sp = 0;
  for (const Instruction& ins : program_) {
    double r = 0.0;
    switch (ins.kind) {
      case ExprNode::Kind::number:
        r = ins.number;
        break;
      case ExprNode::Kind::variable:
        if (!bindings.has(ins.variable)) {
          throw EvaluationError("unbound variable '" + std::string(variable_name(ins.variable)) + "'");
        }
        r = bindings.get(ins.variable);
        break;
      case ExprNode::Kind::negate:
        r = -stack[--sp];
        break;
      case ExprNode::Kind::add:
        sp -= 2;
        r = stack[sp] + stack[sp + 1];
        break;
      case ExprNode::Kind::sub:
        sp -= 2;
        r = stack[sp] - stack[sp + 1];
        break;
      case ExprNode::Kind::mul:
        sp -= 2;
        r = stack[sp] * stack[sp + 1];
        break;
      case ExprNode::Kind::div:
        sp -= 2;
        if (stack[sp + 1] == 0.0) eval_fail("division by zero", ins.node);
        r = stack[sp] / stack[sp + 1];
        break;
      case ExprNode::Kind::power:
        sp -= 2;
        r = apply_call(Function::pow, stack[sp], stack[sp + 1], ins.node);
        break;
      case ExprNode::Kind::call:
        if (ins.function == Function::pow) {
          sp -= 2;
          r = apply_call(Function::pow, stack[sp], stack[sp + 1], ins.node);
        } else {
          sp -= 1;
          r = apply_call(ins.function, stack[sp], 0.0, ins.node);
        }
        break;
    }
    if (!std::isfinite(r)) eval_fail("non-finite result", ins.node);
    stack[sp++] = r;
  }
  return stack[0];
}

std::string Expression::to_string() const { return varfrac::to_string(*root_); }

}  // namespace varfrac
