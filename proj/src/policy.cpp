#include "consyn/policy.hpp"

#include <cmath>

namespace consyn {

Eigen::VectorXd sat(const Eigen::VectorXd& y, double alpha) {
  double norm = y.norm();
  if (norm < alpha) return y;
  Eigen::VectorXd scaled = y * (alpha / norm);
  // Guard against the rescaled norm landing an ulp above alpha.
  while (scaled.norm() > alpha) scaled *= 0.9999999999999999;
  return scaled;
}

namespace {

ExprVector couplingTransposeGrad(const ExprMatrix& g, const ExprVector& vx) {
  ExprVector out(static_cast<std::size_t>(g.cols));
  for (int j = 0; j < g.cols; ++j) {
    Expr acc = Expr::constant(0.0);
    for (int i = 0; i < g.rows; ++i) acc = acc + g(i, j) * vx[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

}  // namespace

PolicyPair saturatedPolicies(const SystemDefinition& system) {
  ExprVector g1t = couplingTransposeGrad(system.spec.g1, system.Vx);
  ExprVector g2t = couplingTransposeGrad(system.spec.g2, system.Vx);
  double a1 = system.spec.alpha1;
  double a2 = system.spec.alpha2;
  PolicyPair pair;
  pair.mode = PolicyMode::saturated;
  pair.uStar = [g2t, a2](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-sat(0.5 * evalVector(g2t, x), a2));
  };
  pair.wStar = [g1t, a1](const Eigen::VectorXd& x) {
    return sat(0.5 * evalVector(g1t, x), a1);
  };
  return pair;
}

PolicyPair unsaturatedPolicies(const SystemDefinition& system) {
  ExprVector g1t = couplingTransposeGrad(system.spec.g1, system.Vx);
  ExprVector g2t = couplingTransposeGrad(system.spec.g2, system.Vx);
  PolicyPair pair;
  pair.mode = PolicyMode::unsaturated;
  pair.uStar = [g2t](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-(0.5 * evalVector(g2t, x)));
  };
  pair.wStar = [g1t](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(0.5 * evalVector(g1t, x));
  };
  return pair;
}

DomainX::DomainX(const ProblemSpec& spec)
    : alpha1_(spec.alpha1), alpha2_(spec.alpha2) {
  ExprVector vx = gradient(spec.V, spec.n);
  g1tVx_ = couplingTransposeGrad(spec.g1, vx);
  g2tVx_ = couplingTransposeGrad(spec.g2, vx);
}

bool DomainX::contains(const Eigen::VectorXd& x) const {
  // X is open; boundary states count as outside.
  return (0.5 * evalVector(g2tVx_, x)).norm() < alpha2_ &&
         (0.5 * evalVector(g1tVx_, x)).norm() < alpha1_;
}

bool inDomainX(const ProblemSpec& spec, const Eigen::VectorXd& x) {
  return DomainX(spec).contains(x);
}

}  // namespace consyn
