#include "consyn/analysis.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "consyn/policy.hpp"

namespace consyn {

namespace {

struct PointData {
  Eigen::VectorXd vx;
  Eigen::VectorXd fv;
  Eigen::VectorXd g1tVx;  // g1' Vx
  Eigen::VectorXd g2tVx;  // g2' Vx
  Eigen::MatrixXd G1;
  Eigen::MatrixXd G2;
};

PointData evalPoint(const SystemDefinition& sys, const Eigen::VectorXd& x) {
  PointData d;
  d.vx = evalVector(sys.Vx, x);
  d.fv = evalVector(sys.f, x);
  d.G1 = evalMatrix(sys.spec.g1, x);
  d.G2 = evalMatrix(sys.spec.g2, x);
  d.g1tVx = d.G1.transpose() * d.vx;
  d.g2tVx = d.G2.transpose() * d.vx;
  return d;
}

double quadraticGameTerms(const PointData& d) {
  return 0.25 * (d.g1tVx.squaredNorm() - d.g2tVx.squaredNorm());
}

}  // namespace

double hjiResidual(const SystemDefinition& system, const Eigen::VectorXd& x) {
  PointData d = evalPoint(system, x);
  double q = evalScalar(system.q, x);
  return d.vx.dot(d.fv) + quadraticGameTerms(d) + q;
}

double saturatedHamiltonianResidual(const SystemDefinition& system,
                                    const Eigen::VectorXd& x) {
  PointData d = evalPoint(system, x);
  double q = evalScalar(system.q, x);
  Eigen::VectorXd u = -sat(0.5 * d.g2tVx, system.spec.alpha2);
  Eigen::VectorXd w = sat(0.5 * d.g1tVx, system.spec.alpha1);
  double uTerm = (u + 0.5 * d.g2tVx).squaredNorm();
  double wTerm = (w - 0.5 * d.g1tVx).squaredNorm();
  return uTerm - wTerm + d.vx.dot(d.fv) + quadraticGameTerms(d) + q;
}

double infSupLieDerivative(const SystemDefinition& system, const Eigen::VectorXd& x) {
  PointData d = evalPoint(system, x);
  const double a1 = system.spec.alpha1;
  const double a2 = system.spec.alpha2;
  const double s1 = d.g1tVx.norm();
  const double s2 = d.g2tVx.norm();

  Eigen::VectorXd hv = evalVector(system.h, x);
  double viaH = 0.25 * s2 * s2 - a2 * s2 - 0.25 * s1 * s1 + a1 * s1 - d.vx.dot(hv);

  Eigen::MatrixXd Pm = evalMatrix(system.P, x);
  double vPv = d.vx.dot(Pm * d.vx);
  double viaP = -0.75 * s1 * s1 + a1 * s1 - a2 * s2 - vPv;

  double tol = 1e-9 * (1.0 + std::max(std::abs(viaH), std::abs(viaP)));
  if (std::abs(viaH - viaP) > tol)
    throw AnalysisError("inf-sup forms disagree: " + std::to_string(viaH) + " vs " +
                        std::to_string(viaP));
  return viaP;
}

namespace {

// Candidate points in the closed alpha-ball: origin, the two signed
// boundary points along `preferred` (the analytic optimizer direction),
// a half-radius copy of each, and seeded random directions on the sphere
// and at half radius.
std::vector<Eigen::VectorXd> ballCandidates(const Eigen::VectorXd& preferred,
                                            double alpha, int dim, int gridDensity,
                                            std::uint64_t seed) {
  std::vector<Eigen::VectorXd> pts;
  pts.push_back(Eigen::VectorXd::Zero(dim));
  if (preferred.norm() > 0.0) {
    Eigen::VectorXd dir = preferred / preferred.norm();
    pts.push_back(alpha * dir);
    pts.push_back(-alpha * dir);
    pts.push_back(0.5 * alpha * dir);
    pts.push_back(-0.5 * alpha * dir);
  }
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int s = 0; s < gridDensity; ++s) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      // Box-Muller, kept hand-rolled so the draw stays reproducible.
      double u1 = std::max(uniform01(), 1e-300);
      double u2 = uniform01();
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    double norm = v.norm();
    if (norm == 0.0) continue;
    pts.push_back(alpha * v / norm);
    pts.push_back(0.5 * alpha * v / norm);
  }
  return pts;
}

}  // namespace

double bruteForceInfSup(const SystemDefinition& system, const Eigen::VectorXd& x,
                        int gridDensity) {
  if (gridDensity < 8) throw AnalysisError("bruteForceInfSup: gridDensity must be >= 8");
  PointData d = evalPoint(system, x);
  const auto us = ballCandidates(d.g2tVx, system.spec.alpha2, system.spec.p,
                                 gridDensity, 0x9e3779b97f4a7c15ull);
  const auto ws = ballCandidates(d.g1tVx, system.spec.alpha1, system.spec.m,
                                 gridDensity, 0xbf58476d1ce4e5b9ull);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& u : us) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& w : ws) {
      double lie = d.vx.dot(d.fv + d.G1 * w + d.G2 * u);
      worst = std::max(worst, lie);
    }
    best = std::min(best, worst);
  }
  return best;
}

namespace {

// Structural detection of V = 1/2 x'Qx: flatten the sum and require every
// term to be a constant times a degree-two monomial.
bool collectQuadraticTerm(const Expr& e, double sign, Eigen::MatrixXd& coeffs) {
  double coef = sign;
  std::vector<int> vars;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr cur = stack.back();
    stack.pop_back();
    switch (cur.kind()) {
      case Expr::Kind::Constant:
        coef *= cur.constantValue();
        break;
      case Expr::Kind::Variable:
        vars.push_back(cur.variableIndex());
        break;
      case Expr::Kind::Negate:
        coef = -coef;
        stack.push_back(cur.left());
        break;
      case Expr::Kind::Multiply:
        stack.push_back(cur.left());
        stack.push_back(cur.right());
        break;
      case Expr::Kind::Power: {
        if (cur.left().kind() != Expr::Kind::Variable) return false;
        for (int r = 0; r < cur.exponent(); ++r)
          vars.push_back(cur.left().variableIndex());
        break;
      }
      default:
        return false;
    }
    if (vars.size() > 2) return false;
  }
  if (vars.size() != 2) return false;
  int i = vars[0] - 1, j = vars[1] - 1;
  if (i == j) {
    coeffs(i, i) += 2.0 * coef;  // c x_i^2 contributes Q_ii = 2c
  } else {
    coeffs(i, j) += coef;  // c x_i x_j contributes Q_ij = Q_ji = c
    coeffs(j, i) += coef;
  }
  return true;
}

bool flattenQuadratic(const Expr& e, double sign, Eigen::MatrixXd& coeffs) {
  switch (e.kind()) {
    case Expr::Kind::Add:
      return flattenQuadratic(e.left(), sign, coeffs) &&
             flattenQuadratic(e.right(), sign, coeffs);
    case Expr::Kind::Subtract:
      return flattenQuadratic(e.left(), sign, coeffs) &&
             flattenQuadratic(e.right(), -sign, coeffs);
    case Expr::Kind::Negate:
      return flattenQuadratic(e.left(), -sign, coeffs);
    default:
      return collectQuadraticTerm(e, sign, coeffs);
  }
}

std::optional<Eigen::MatrixXd> detectQuadraticForm(const Expr& V, int n) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  if (!flattenQuadratic(V, 1.0, Q)) return std::nullopt;
  return Q;
}

}  // namespace

RclfRegion estimateC(const ProblemSpec& spec, double b) {
  if (!(b > 0)) throw AnalysisError("estimateC: b must be > 0");
  RclfRegion region;
  region.b = b;

  if (auto Q = detectQuadraticForm(spec.V, spec.n)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(*Q);
    double lambdaMin = solver.eigenvalues().minCoeff();
    if (lambdaMin > 0.0) {
      // ||Qx|| <= b implies V = 1/2 x'Qx <= b^2 / (2 lambda_min), with
      // equality along the smallest eigenvector, so the level is tight.
      region.c = b * b / (2.0 * lambdaMin);
      region.method = LevelMethod::analyticQuadratic;
      return region;
    }
  }

  // Sampled estimate over nested boxes: wide boxes cover growth, narrow
  // ones resolve the low-gradient region near the origin where the
  // binding states live.
  const ExprVector vx = gradient(spec.V, spec.n);
  double worst = 0.0;
  const double widths[] = {10.0, 5.0, 2.0, 1.0, 0.5};
  std::uint64_t seed = 42;
  for (double w : widths) {
    StateSampler sampler(spec.n, seed++, w);
    for (int i = 0; i < 4000; ++i) {
      Eigen::VectorXd x = sampler.next();
      if (evalVector(vx, x).norm() <= b)
        worst = std::max(worst, evalScalar(spec.V, x));
    }
  }
  region.inflation = 1.1;
  region.c = region.inflation * worst;
  region.method = LevelMethod::sampled;
  return region;
}

AnalysisReport rclfCertify(const SystemDefinition& system, const RclfRegion& region,
                           StateSampler& sampler, int count) {
  AnalysisReport report;
  const double a1 = system.spec.alpha1;
  const double a2 = system.spec.alpha2;

  for (const auto& x : sampler.states(count)) {
    AnalysisSample rec;
    rec.x = x;
    rec.V = evalScalar(system.spec.V, x);
    rec.hji = hjiResidual(system, x);
    rec.infSup = infSupLieDerivative(system, x);
    rec.inX = inDomainX(system.spec, x);
    rec.gradNorm = evalVector(system.Vx, x).norm();
    report.worstAbsHji = std::max(report.worstAbsHji, std::abs(rec.hji));

    if (rec.V > region.c) {
      PointData d = evalPoint(system, x);
      double s2 = d.g2tVx.norm();
      double vPv = d.vx.dot(evalMatrix(system.P, x) * d.vx);
      double vertex = a1 * a1 / 3.0 - a2 * s2 - vPv;

      if (report.checkedAboveLevel == 0 || rec.infSup > report.worstInfSupAboveLevel)
        report.worstInfSupAboveLevel = rec.infSup;
      ++report.checkedAboveLevel;

      if (!(rec.infSup < 0.0))
        report.violations.push_back({"rclf-negativity", x, rec.infSup});
      if (!(a1 * a1 / 3.0 - a2 * s2 < vPv))
        report.violations.push_back({"p-condition", x, a1 * a1 / 3.0 - a2 * s2 - vPv});
      if (rec.infSup > vertex + 1e-9 * (1.0 + std::abs(vertex)))
        report.violations.push_back({"parabola-vertex-bound", x, rec.infSup - vertex});
    }
    report.samples.push_back(std::move(rec));
  }
  return report;
}

}  // namespace consyn
