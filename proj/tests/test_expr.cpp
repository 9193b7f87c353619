#include <doctest.h>

#include <array>
#include <cmath>

#include "consyn/expr.hpp"
#include "support/generators.hpp"

using namespace consyn;
using consyn::testing::centralDifference;
using consyn::testing::ExprGen;

namespace {

double evalAt(const Expr& e, std::initializer_list<double> x) {
  std::vector<double> v(x);
  return e.eval(v);
}

}  // namespace

TEST_CASE("parse and evaluate basic expressions") {
  CHECK(evalAt(parseExpr("x1^2 + 0.5*x2", 2), {2, 4}) == doctest::Approx(6.0));
  CHECK(evalAt(parseExpr("x1", 1), {7}) == doctest::Approx(7.0));
  CHECK(evalAt(parseExpr("0.75*x1*x2^4", 2), {1, 2}) == doctest::Approx(12.0));
  CHECK(evalAt(parseExpr("(x1+x2)^2", 2), {1, 2}) == doctest::Approx(9.0));
  CHECK(evalAt(parseExpr("x2 - x2", 2), {3.7, -1.25}) == 0.0);
}

TEST_CASE("precedence and associativity") {
  // ^ binds tighter than unary minus: -x^2 is -(x^2).
  CHECK(evalAt(parseExpr("-x1^2", 1), {3}) == doctest::Approx(-9.0));
  // unary minus binds tighter than *: -2*x1 is (-2)*x1, not -(2*x1) structurally,
  // but both evaluate identically; check a case where grouping matters.
  CHECK(evalAt(parseExpr("6 - 2 - 1", 1), {0}) == doctest::Approx(3.0));
  CHECK(evalAt(parseExpr("12 / 2 / 3", 1), {0}) == doctest::Approx(2.0));
  // ^ is right-associative; the exponent folds to a constant integer.
  CHECK(evalAt(parseExpr("x1^2^3", 1), {2}) == doctest::Approx(256.0));
  CHECK(evalAt(parseExpr("2e2 + 1.5E-1", 1), {0}) == doctest::Approx(200.15));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parseExpr("x1 + ", 2), ParseError);
  CHECK_THROWS_AS(parseExpr("(x1 + x2", 2), ParseError);
  CHECK_THROWS_AS(parseExpr("x1 $ x2", 2), ParseError);
  CHECK_THROWS_AS(parseExpr("y1", 2), ParseError);
  try {
    parseExpr("x1 + x3", 2);
    FAIL("expected out-of-range variable to throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
    CHECK(std::string(e.what()).find("x3") != std::string::npos);
  }
}

TEST_CASE("exponents must be nonnegative integer constants") {
  CHECK_THROWS_AS(parseExpr("x1^-2", 1), ParseError);
  CHECK_THROWS_AS(parseExpr("x1^2.5", 1), ParseError);
  CHECK_THROWS_AS(parseExpr("x1^x1", 1), ParseError);
  CHECK(evalAt(parseExpr("x1^0", 1), {5}) == doctest::Approx(1.0));
}

TEST_CASE("evaluation rejects states shorter than the referenced variables") {
  Expr e = Expr::variable(3) * Expr::constant(2.0);
  std::vector<double> tooShort{1.0, 2.0};
  CHECK_THROWS_AS(e.eval(tooShort), EvalError);
  std::vector<double> ok{1.0, 2.0, 5.0};
  CHECK(e.eval(ok) == doctest::Approx(10.0));
}

TEST_CASE("division by zero raises an evaluation error with the subexpression") {
  Expr e = parseExpr("x1/x2", 2);
  try {
    evalAt(e, {1, 0});
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(err.expression().find("x1/x2") != std::string::npos);
  }
  CHECK(evalAt(e, {1, 2}) == doctest::Approx(0.5));
}

TEST_CASE("symbolic differentiation on known cases") {
  Expr d1 = parseExpr("x1*x2", 2).diff(1);
  CHECK(d1.sameAs(Expr::variable(2)));  // constant folding collapses 1*x2 + x1*0

  Expr quad = parseExpr("0.5*x1^2 + 0.5*x2^2", 2);
  CHECK(evalAt(quad.diff(1), {3, 4}) == doctest::Approx(3.0));
  CHECK(evalAt(quad.diff(2), {3, 4}) == doctest::Approx(4.0));

  CHECK(evalAt(parseExpr("x1^3", 1).diff(1), {2}) == doctest::Approx(12.0));

  Expr rational = parseExpr("x1 / (1 + x1^2)", 1);
  // d/dx x/(1+x^2) = (1 - x^2)/(1+x^2)^2
  CHECK(evalAt(rational.diff(1), {2}) == doctest::Approx((1.0 - 4.0) / 25.0));
}

TEST_CASE("gradient of the benchmark value functions") {
  Expr v2 = parseExpr("0.5*x1^2 + 0.5*x2^2", 2);
  auto g2 = gradient(v2, 2);
  REQUIRE(g2.size() == 2);
  for (double a : {0.3, -1.7, 4.0}) {
    std::vector<double> x{a, 2 * a + 1};
    CHECK(g2[0].eval(x) == doctest::Approx(x[0]));
    CHECK(g2[1].eval(x) == doctest::Approx(x[1]));
  }

  auto g3 = gradient(parseExpr("0.5*x1^2 + 0.5*x2^2 + 0.5*x3^2", 3), 3);
  std::vector<double> x{1.0, -2.0, 0.5};
  for (int i = 0; i < 3; ++i) CHECK(g3[static_cast<std::size_t>(i)].eval(x) ==
                                    doctest::Approx(x[static_cast<std::size_t>(i)]));

  auto gConst = gradient(parseExpr("1", 2), 2);
  CHECK(gConst[0].sameAs(Expr::constant(0.0)));
  CHECK(gConst[1].sameAs(Expr::constant(0.0)));
}

TEST_CASE("derivatives match central finite differences on random trees") {
  ExprGen gen(2024, 3, /*allowDivision=*/false);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Expr e = gen.next(6);
    std::vector<double> x = gen.point();
    double value = e.eval(x);
    if (!std::isfinite(value)) continue;
    for (int var = 1; var <= 3; ++var) {
      double sym = e.diff(var).eval(x);
      double fd = centralDifference(e, var, x);
      CHECK(std::abs(sym - fd) <= 1e-6 * (1.0 + std::abs(value)));
    }
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("printing round-trips structurally") {
  ExprGen gen(99, 3, /*allowDivision=*/true);
  for (int trial = 0; trial < 1000; ++trial) {
    Expr e = gen.next(6);
    Expr back = parseExpr(e.str(), 3);
    CHECK(back.sameAs(e));
  }
  // A few fixed shapes that exercise the parenthesizer.
  for (const char* src : {"x1 - (x2 + x3)", "x1*(x2*x3)", "x1/(x2*x3)", "-(x1*x2)",
                          "(x1 + x2)^3", "-x1^2", "(x1^2)^3", "x1 - -x2"}) {
    Expr e = parseExpr(src, 3);
    CHECK(parseExpr(e.str(), 3).sameAs(e));
  }
}

TEST_CASE("differentiation is linear") {
  ExprGen gen(7, 2, /*allowDivision=*/false);
  for (int trial = 0; trial < 200; ++trial) {
    Expr a = gen.next(5);
    Expr b = gen.next(5);
    Expr sum = a + b;
    for (int var = 1; var <= 2; ++var) {
      Expr lhs = sum.diff(var);
      Expr rhs = a.diff(var) + b.diff(var);
      for (int pt = 0; pt < 3; ++pt) {
        std::vector<double> x = gen.point();
        double l = lhs.eval(x);
        double r = rhs.eval(x);
        if (!std::isfinite(l) || !std::isfinite(r)) continue;
        CHECK(std::abs(l - r) <= 1e-12 * (1.0 + std::max(std::abs(l), std::abs(r))));
      }
    }
  }
}

TEST_CASE("constant folding drops zero terms and folds powers") {
  Expr e = parseExpr("0*x1 + x2", 2);
  CHECK(e.sameAs(Expr::variable(2)));
  CHECK(parseExpr("2^3", 1).sameAs(Expr::constant(8.0)));
  CHECK(parseExpr("x1*1", 1).sameAs(Expr::variable(1)));
  CHECK(parseExpr("0/x1", 1).kind() == Expr::Kind::Divide);  // errors at x1 = 0 survive
  CHECK(parseExpr("x1^1", 1).sameAs(Expr::variable(1)));
}
