#include "consyn/design.hpp"

#include <cmath>

namespace consyn {

namespace {

// g' v for an n x c matrix of expressions and an n-vector.
ExprVector transposeTimes(const ExprMatrix& g, const ExprVector& v) {
  ExprVector out(static_cast<std::size_t>(g.cols));
  for (int j = 0; j < g.cols; ++j) {
    Expr acc = Expr::constant(0.0);
    for (int i = 0; i < g.rows; ++i) acc = acc + g(i, j) * v[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

ExprVector matTimes(const ExprMatrix& g, const ExprVector& v) {
  ExprVector out(static_cast<std::size_t>(g.rows));
  for (int i = 0; i < g.rows; ++i) {
    Expr acc = Expr::constant(0.0);
    for (int j = 0; j < g.cols; ++j) acc = acc + g(i, j) * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Expr dot(const ExprVector& a, const ExprVector& b) {
  Expr acc = Expr::constant(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
  return acc;
}

ExprVector scaled(double c, const ExprVector& v) {
  ExprVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Expr::constant(c) * v[i];
  return out;
}

ExprVector sum(const ExprVector& a, const ExprVector& b) {
  ExprVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ExprVector diffVec(const ExprVector& a, const ExprVector& b) {
  ExprVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Expr onePlusGradNormSq(const ExprVector& vx) {
  return Expr::constant(1.0) + dot(vx, vx);
}

}  // namespace

double gainK(const ProblemSpec& spec) {
  return spec.alpha1 * spec.alpha1 / 3.0 * (1.0 + 1.0 / (spec.b * spec.b));
}

ExprMatrix buildP(const ProblemSpec& spec) {
  const ExprVector vx = gradient(spec.V, spec.n);
  const Expr kTerm = Expr::constant(gainK(spec)) / onePlusGradNormSq(vx);
  ExprMatrix out(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      Expr outer = Expr::constant(0.0);
      for (int l = 0; l < spec.p; ++l) outer = outer + spec.g2(i, l) * spec.g2(j, l);
      Expr entry = Expr::constant(spec.alpha2) * outer + spec.E(i, j);
      if (i == j) entry = entry + kTerm;
      out(i, j) = entry;
    }
  }
  return out;
}

ExprVector buildH(const ProblemSpec& spec) {
  const ExprVector vx = gradient(spec.V, spec.n);
  const ExprMatrix P = buildP(spec);
  const ExprVector w2 = matTimes(spec.g2, transposeTimes(spec.g2, vx));
  const ExprVector w1 = matTimes(spec.g1, transposeTimes(spec.g1, vx));
  ExprVector core = sum(sum(scaled(0.25, w2), scaled(0.5, w1)), matTimes(P, vx));
  return sum(core, spec.gamma);
}

SystemDefinition synthesize(const ProblemSpec& spec) {
  SystemDefinition sys;
  sys.spec = spec;
  sys.k = gainK(spec);
  sys.Vx = gradient(spec.V, spec.n);

  const ExprVector w1 = matTimes(spec.g1, transposeTimes(spec.g1, sys.Vx));
  const ExprVector w2 = matTimes(spec.g2, transposeTimes(spec.g2, sys.Vx));
  const Expr kTerm = Expr::constant(sys.k) / onePlusGradNormSq(sys.Vx);

  // Route one: expanded closed form, term by term.
  ExprVector f(static_cast<std::size_t>(spec.n));
  const ExprVector eVx = matTimes(spec.E, sys.Vx);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = Expr::constant(-0.75) * w1[i] - Expr::constant(spec.alpha2) * w2[i] -
           kTerm * sys.Vx[i] - eVx[i] + spec.gamma[i];
  }

  // Route two: composition through h. The orthogonal field enters both
  // routes with the same sign (its sign is free since Vx'gamma = 0), so
  // the routes must agree identically; a mismatch means the expression
  // algebra above is wrong.
  sys.P = buildP(spec);
  const ExprVector hCore =
      sum(sum(scaled(0.25, w2), scaled(0.5, w1)), matTimes(sys.P, sys.Vx));
  sys.h = sum(hCore, spec.gamma);
  ExprVector fComposed =
      sum(diffVec(diffVec(scaled(0.25, w2), scaled(0.25, w1)), hCore), spec.gamma);

  StateSampler sampler(spec.n);
  sys.crossCheckDeviation = 0.0;
  for (const auto& x : sampler.states(100)) {
    Eigen::VectorXd a = evalVector(f, x);
    Eigen::VectorXd b = evalVector(fComposed, x);
    for (int i = 0; i < spec.n; ++i) {
      double dev = std::abs(a[i] - b[i]);
      double allowed = 1e-12 * (1.0 + std::max(std::abs(a[i]), std::abs(b[i])));
      sys.crossCheckDeviation = std::max(sys.crossCheckDeviation, dev);
      if (dev > allowed)
        throw SynthesisError("internal dynamics routes disagree by " +
                             std::to_string(dev) + " at a sampled state");
    }
  }

  sys.f = std::move(f);
  sys.q = dot(sys.Vx, sys.h);
  return sys;
}

Expr admissibleUtility(const SystemDefinition& system) {
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(system.spec.n);
  double q0 = evalScalar(system.q, origin);
  if (q0 != 0.0)
    throw SynthesisError("utility does not vanish at the origin: q(0) = " +
                         std::to_string(q0));
  StateSampler sampler(system.spec.n);
  for (const auto& x : sampler.states(200)) {
    if (x.isZero()) continue;
    double q = evalScalar(system.q, x);
    if (!(q > 0.0))
      throw SynthesisError("utility is not positive away from the origin");
  }
  return system.q;
}

}  // namespace consyn
