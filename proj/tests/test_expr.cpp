#include "doctest.h"
#include "gcalc/error.hpp"
#include "gcalc/expr.hpp"

#include <cmath>

using gcalc::Expr;

TEST_CASE("expression parsing and evaluation") {
  CHECK(Expr::parse("1 + 2*3").eval({}) == 7.0);
  CHECK(Expr::parse("2^3^2").eval({}) == 512.0);
  CHECK(Expr::parse("-x^2")("x", 3.0) == -9.0);
  CHECK(Expr::parse("sin(x)^2 + cos(x)^2")("x", 0.7) == doctest::Approx(1.0));
  CHECK(Expr::parse("exp(log(x))")("x", 2.5) == doctest::Approx(2.5));
  CHECK(Expr::parse("0.5*x*y").eval({{"x", 2.0}, {"y", 3.0}}) == 3.0);
  CHECK(Expr::parse("1e-3 * x")("x", 2.0) == doctest::Approx(2e-3));
}

TEST_CASE("expression errors name the module") {
  CHECK_THROWS_WITH_AS(Expr::parse("1 +"), doctest::Contains("expr:"), gcalc::Error);
  CHECK_THROWS_WITH_AS(Expr::parse("(x"), doctest::Contains("expr:"), gcalc::Error);
  CHECK_THROWS_AS(Expr::parse("x + y").eval({{"x", 1.0}}), gcalc::Error);
  CHECK_THROWS_AS(Expr::parse("nosuch(x)")("x", 1.0), gcalc::Error);
}

TEST_CASE("variables are collected") {
  auto v = Expr::parse("x*y + sin(z) + x").variables();
  CHECK(v.size() == 3);
}
