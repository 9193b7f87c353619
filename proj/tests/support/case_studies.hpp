#ifndef CONSYN_TESTS_CASE_STUDIES_HPP
#define CONSYN_TESTS_CASE_STUDIES_HPP

#include "consyn/design.hpp"
#include "consyn/system_model.hpp"

namespace consyn::testing {

// 2-D benchmark: constant couplings, quadratic value function.
inline ProblemSpec makeSpecA() {
  ProblemSpec spec;
  spec.n = 2;
  spec.m = 1;
  spec.p = 1;
  spec.V = parseExpr("0.5*x1^2 + 0.5*x2^2", 2);
  spec.g1 = ExprMatrix(2, 1);
  spec.g1(0, 0) = parseExpr("1", 2);
  spec.g1(1, 0) = parseExpr("5", 2);
  spec.g2 = ExprMatrix(2, 1);
  spec.g2(0, 0) = parseExpr("-1", 2);
  spec.g2(1, 0) = parseExpr("0", 2);
  spec.E = ExprMatrix(2, 2);
  spec.E(0, 0) = parseExpr("10", 2);
  spec.E(0, 1) = parseExpr("0", 2);
  spec.E(1, 0) = parseExpr("0", 2);
  spec.E(1, 1) = parseExpr("20", 2);
  spec.gamma = {parseExpr("-x2", 2), parseExpr("x1", 2)};
  spec.alpha1 = 10.0;
  spec.alpha2 = 20.0;
  spec.b = std::sqrt(0.5);
  return spec;
}

// 3-D benchmark: nonlinear couplings.
inline ProblemSpec makeSpecB() {
  ProblemSpec spec;
  spec.n = 3;
  spec.m = 1;
  spec.p = 1;
  spec.V = parseExpr("0.5*x1^2 + 0.5*x2^2 + 0.5*x3^2", 3);
  spec.g1 = ExprMatrix(3, 1);
  spec.g1(0, 0) = parseExpr("-x2^2", 3);
  spec.g1(1, 0) = parseExpr("x1*x2", 3);
  spec.g1(2, 0) = parseExpr("x3", 3);
  spec.g2 = ExprMatrix(3, 1);
  spec.g2(0, 0) = parseExpr("x3", 3);
  spec.g2(1, 0) = parseExpr("1", 3);
  spec.g2(2, 0) = parseExpr("-x2", 3);
  spec.E = ExprMatrix(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) spec.E(i, j) = Expr::constant(0.0);
  spec.E(0, 0) = parseExpr("10", 3);
  spec.E(1, 1) = parseExpr("5", 3);
  spec.E(2, 2) = parseExpr("5", 3);
  spec.gamma = {parseExpr("-x2", 3), parseExpr("x1", 3), parseExpr("0", 3)};
  spec.alpha1 = 5.0;
  spec.alpha2 = 10.0;
  spec.b = std::sqrt(0.5);
  return spec;
}

inline const SystemDefinition& systemA() {
  static SystemDefinition sys = synthesize(makeSpecA());
  return sys;
}

inline const SystemDefinition& systemB() {
  static SystemDefinition sys = synthesize(makeSpecB());
  return sys;
}

}  // namespace consyn::testing

#endif  // CONSYN_TESTS_CASE_STUDIES_HPP
