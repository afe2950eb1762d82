#include <gtest/gtest.h>

#include "mbhf/expr.hpp"
#include "mbhf/paramlin.hpp"
#include "mbhf/ratfun.hpp"

using namespace mbhf;

TEST(Rational, ReducesAndCompares) {
  EXPECT_EQ(Rational(6, -4).str(), "-3/2");
  EXPECT_TRUE(Rational(1, 3) < Rational(1, 2));
  EXPECT_EQ((Rational(1, 6) + Rational(1, 3)).str(), "1/2");
  EXPECT_THROW(Rational(INT64_MAX) * Rational(INT64_MAX), Error);
}

TEST(Expr, ParsePrintRoundTrip) {
  for (std::string s : {"x/(1-x)", "-x", "(x-y)/y", "1-x/y", "x^2-2*x*y", "b'+c"}) {
    Expr e = parse_expr(s);
    EXPECT_TRUE(expr_equal(e, parse_expr(e.str()))) << s << " -> " << e.str();
  }
  EXPECT_EQ(parse_expr("x").op(), Op::Var);
  EXPECT_EQ(parse_expr("a").op(), Op::Param);
  EXPECT_THROW(parse_expr("x^y"), Error);
  EXPECT_THROW(parse_expr("x+"), Error);
}

TEST(Expr, EvalErrors) {
  Expr e = parse_expr("1/(1-x)");
  EXPECT_THROW(eval_expr(e, {}), Error);
  try {
    eval_exact(e, {{"x", Rational(1)}});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::PoleAtPoint);
  }
  EXPECT_NEAR(std::abs(eval_expr(e, {{"x", cplx(0.5)}}) - 2.0), 0, 1e-15);
}

TEST(Expr, EqualityOnRandomPoints) {
  EXPECT_TRUE(expr_equal(parse_expr("x/(1-x)"), parse_expr("-1+1/(1-x)")));
  EXPECT_TRUE(expr_equal(parse_expr("(x-y)/y"), parse_expr("x/y-1")));
  EXPECT_FALSE(expr_equal(parse_expr("x/(1-x)"), parse_expr("x/(1+x)")));
  EXPECT_TRUE(expr_equal(parse_expr("1/(x-y)*(x-y)"), parse_expr("1")));
}

TEST(Expr, SimplifyBasic) {
  EXPECT_EQ(simplify_basic(parse_expr("--x*1")).str(), "x");
  EXPECT_EQ(simplify_basic(parse_expr("2+3*4")).str(), "14");
}

TEST(RatFun, Normalizes) {
  EXPECT_EQ(normalize_rational(parse_expr("-(-x)/(1-x)")).str(), "x/(1-x)");
  EXPECT_TRUE(expr_equal(normalize_rational(parse_expr("1/(1-1/(1-x))")), parse_expr("(x-1)/x")));
}

TEST(ParamLin, ParseAndPrint) {
  EXPECT_EQ(parse_paramlin("c-a-b").str(), "c-a-b");
  EXPECT_EQ(parse_paramlin("d-(a+c)+1").str(), "d-a-c+1");
  EXPECT_EQ(parse_linarg("a+z3+z1").str(), "a+z1+z3");
  EXPECT_EQ(parse_linarg("z2-z3").str(), "z2-z3");
  EXPECT_EQ(parse_linarg("2*z3+z2").str(), "z2+2z3");
}
