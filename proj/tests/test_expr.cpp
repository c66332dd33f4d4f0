#include <doctest.h>

#include <cmath>

#include "areabound/expr.hpp"

using areabound::Expression;

TEST_SUITE_BEGIN("expr");

TEST_CASE("literals, variables, arithmetic") {
  CHECK(Expression::parse("2")(0, 0) == 2.0);
  CHECK(Expression::parse("x")(3, 0) == 3.0);
  CHECK(Expression::parse("y")(0, -2) == -2.0);
  CHECK(Expression::parse("1+2*3")(0, 0) == 7.0);
  CHECK(Expression::parse("(1+2)*3")(0, 0) == 9.0);
  CHECK(Expression::parse("7/2")(0, 0) == 3.5);
  CHECK(Expression::parse("1 - 2 - 3")(0, 0) == -4.0);
  CHECK(Expression::parse("-x^2")(2, 0) == -4.0);
}

TEST_CASE("power is right associative") {
  CHECK(Expression::parse("2^3^2")(0, 0) == 512.0);
  CHECK(Expression::parse("x^2")(3, 0) == 9.0);
}

TEST_CASE("function calls") {
  CHECK(Expression::parse("exp(0)")(0, 0) == 1.0);
  CHECK(Expression::parse("sin(x)*cos(y)")(1.2, 0.4) ==
        doctest::Approx(std::sin(1.2) * std::cos(0.4)).epsilon(1e-15));
  CHECK(Expression::parse("sqrt(x^2+y^2)")(3, 4) == doctest::Approx(5.0));
  CHECK(Expression::parse("log(cos(x)/cos(y))")(0.3, 0.1) ==
        doctest::Approx(std::log(std::cos(0.3) / std::cos(0.1))).epsilon(1e-15));
  CHECK(Expression::parse("cosh(y)")(0, 0.7) == doctest::Approx(std::cosh(0.7)));
}

TEST_CASE("scientific literals") {
  CHECK(Expression::parse("1e-3")(0, 0) == 1e-3);
  CHECK(Expression::parse("2.5E2")(0, 0) == 250.0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS((void)Expression::parse("1+"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression::parse("foo(1)"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression::parse("z+1"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression::parse("sin x"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression::parse("(1+2"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression::parse("1 2"), std::invalid_argument);
}

TEST_SUITE_END();
