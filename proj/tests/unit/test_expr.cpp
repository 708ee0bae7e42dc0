#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "varfrac/errors.hpp"
#include "varfrac/expr.hpp"

using varfrac::Bindings;
using varfrac::EvaluationError;
using varfrac::Expression;
using varfrac::ParseError;
using varfrac::Variable;

namespace {

double eval(const std::string& src, Bindings b = {}) {
  return Expression::parse(src).evaluate(b);
}

}  // namespace

TEST(ExprParse, ConstantNode) {
  const Expression e = Expression::parse("0.5");
  EXPECT_TRUE(e.is_constant());
  EXPECT_EQ(e.root().kind, varfrac::ExprNode::Kind::number);
  EXPECT_DOUBLE_EQ(e.evaluate({}), 0.5);
}

TEST(ExprParse, BivariateOrder) {
  const Expression e = Expression::parse("0.4 + 0.2*tau*t");
  EXPECT_TRUE(e.free_variables().contains(Variable::t));
  EXPECT_TRUE(e.free_variables().contains(Variable::tau));
  EXPECT_DOUBLE_EQ(e.evaluate(Bindings().set(Variable::t, 1.0).set(Variable::tau, 0.5)), 0.5);
}

TEST(ExprParse, UnknownIdentifierIsNamed) {
  try {
    Expression::parse("gamma(beta+3)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(e.message().find("beta"), std::string::npos);
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 7);
  }
}

TEST(ExprParse, SyntaxErrorReportsColumnAndExpected) {
  try {
    Expression::parse("1 + * 2");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 5);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(Expression::parse(""), ParseError);
  EXPECT_THROW(Expression::parse("(1 + 2"), ParseError);
  EXPECT_THROW(Expression::parse("1 2"), ParseError);
  EXPECT_THROW(Expression::parse("sin"), ParseError);
  EXPECT_THROW(Expression::parse("pow(1)"), ParseError);
  EXPECT_THROW(Expression::parse("t(2)"), ParseError);
  EXPECT_THROW(Expression::parse("2 $ 3"), ParseError);
}

TEST(ExprParse, MultiLineColumnsAreOneBased) {
  try {
    Expression::parse("1 +\n  ?");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(ExprEval, Precedence) {
  EXPECT_DOUBLE_EQ(eval("2+3*4^2"), 50.0);
  EXPECT_DOUBLE_EQ(eval("-2^2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("2^3^2"), 512.0);
  EXPECT_DOUBLE_EQ(eval("(2^3)^2"), 64.0);
  EXPECT_DOUBLE_EQ(eval("8/4/2"), 1.0);
  EXPECT_DOUBLE_EQ(eval("1 - 2 - 3"), -4.0);
  EXPECT_DOUBLE_EQ(eval("2^-1"), 0.5);
}

TEST(ExprEval, ScientificNumbersAndWhitespace) {
  EXPECT_DOUBLE_EQ(eval("1.5e2"), 150.0);
  EXPECT_DOUBLE_EQ(eval("  2.5E-1\t+\n1 "), 1.25);
  EXPECT_DOUBLE_EQ(eval(".5"), 0.5);
}

TEST(ExprEval, Functions) {
  EXPECT_DOUBLE_EQ(eval("t^2", Bindings().set(Variable::t, 3.0)), 9.0);
  EXPECT_DOUBLE_EQ(eval("sqrt(1 + yp^2)", Bindings().set(Variable::yp, 0.0)), 1.0);
  EXPECT_NEAR(eval("gamma(t+1)", Bindings().set(Variable::t, 0.5)), 0.886226925, 1e-9);
  EXPECT_NEAR(eval("sin(1) + cos(1) + exp(1) + ln(2) + abs(-3)"),
              std::sin(1.0) + std::cos(1.0) + std::exp(1.0) + std::log(2.0) + 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(eval("pow(2, 10)"), 1024.0);
  EXPECT_DOUBLE_EQ(eval("(-8)^(1/3*3)"), -8.0);
}

TEST(ExprEval, DomainErrorsNameTheNode) {
  const auto expect_error = [](const std::string& src, const std::string& fragment) {
    try {
      eval(src);
      FAIL() << "expected EvaluationError for " << src;
    } catch (const EvaluationError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("1/(2-2)", "division by zero");
  expect_error("ln(0)", "ln");
  expect_error("sqrt(-1)", "sqrt");
  expect_error("gamma(0)", "gamma");
  expect_error("0^-1", "^");
  expect_error("(-2)^0.5", "^");
  expect_error("exp(1000)", "non-finite");
}

TEST(ExprEval, MissingBinding) {
  EXPECT_THROW(eval("t + 1"), EvaluationError);
  EXPECT_THROW(eval("xi", Bindings().set(Variable::t, 1.0)), EvaluationError);
}

TEST(ExprPrint, RoundTripIsIdempotent) {
  const std::vector<std::string> sources = {
      "0.5",          "0.4 + 0.2*tau*t", "-2^2",          "2^3^2",       "sqrt(1 + yp^2)",
      "1e-7 * t",     "-(t - 1)",        "pow(t, 2) / 3", "-t^-2",       "gamma((t+1)/4 + 3)",
      "1 - (2 - 3)",  "0.1 + 0.2",       "dcap^2 + (iop - xi*t^0.5/gamma(1.5))^2"};
  for (const auto& src : sources) {
    const Expression first = Expression::parse(src);
    const Expression second = Expression::parse(first.to_string());
    EXPECT_EQ(first, second) << src << " -> " << first.to_string();
    EXPECT_EQ(second.to_string(), Expression::parse(second.to_string()).to_string());
  }
}

TEST(ExprPrint, PreservesValues) {
  const Bindings b = Bindings().set(Variable::t, 0.37).set(Variable::tau, 0.81);
  for (const char* src : {"-2^2", "2^3^2", "1 - (2 - 3)", "0.1 + 0.2*tau - t/3", "-(t^-2)"}) {
    const Expression e = Expression::parse(src);
    EXPECT_EQ(e.evaluate(b), Expression::parse(e.to_string()).evaluate(b)) << src;
  }
}

TEST(ExprConcurrency, CopiesShareTreeAndEvaluateIdentically) {
  const Expression e = Expression::parse("sin(t) * tau + gamma(t + 1)");
  const Expression copy = e;
  const Bindings b = Bindings().set(Variable::t, 0.3).set(Variable::tau, 2.0);
  EXPECT_EQ(e.evaluate(b), copy.evaluate(b));
}

TEST(ExprParse, DeepNestingFallsBackToHeapStack) {
  std::string src;
  for (int i = 0; i < 50; ++i) src += "(1 + ";
  src += "1";
  for (int i = 0; i < 50; ++i) src += ")";
  std::string right = "1";
  for (int i = 0; i < 40; ++i) right = "1 + (" + right + ")";
  EXPECT_DOUBLE_EQ(eval(src), 51.0);
  EXPECT_DOUBLE_EQ(eval(right), 41.0);
}
