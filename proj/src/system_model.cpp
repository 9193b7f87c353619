#include "consyn/system_model.hpp"

#include <cmath>

namespace consyn {

bool ExprMatrix::isConstant() const {
  for (const auto& e : entries)
    if (e.containsVariable()) return false;
  return true;
}

double evalScalar(const Expr& e, const Eigen::VectorXd& x) {
  return e.eval({x.data(), static_cast<std::size_t>(x.size())});
}

Eigen::VectorXd evalVector(const ExprVector& v, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = evalScalar(v[i], x);
  return out;
}

Eigen::MatrixXd evalMatrix(const ExprMatrix& m, const Eigen::VectorXd& x) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = evalScalar(m(i, j), x);
  return out;
}

StateSampler::StateSampler(int dimension, std::uint64_t seed, double halfWidth)
    : dim_(dimension), halfWidth_(halfWidth), rng_(seed) {
  if (dimension < 1) throw SpecError("sampler dimension must be >= 1");
}

Eigen::VectorXd StateSampler::next() {
  Eigen::VectorXd x(dim_);
  for (int i = 0; i < dim_; ++i) {
    // Top 53 bits of the engine output give a uniform double in [0, 1).
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    x[i] = -halfWidth_ + 2.0 * halfWidth_ * u;
  }
  return x;
}

std::vector<Eigen::VectorXd> StateSampler::probePoints(int dimension) {
  std::vector<Eigen::VectorXd> pts;
  if (dimension == 2) {
    pts.push_back(Eigen::Vector2d(3, -2));
    pts.push_back(Eigen::Vector2d(-5, 5));
    pts.push_back(Eigen::Vector2d(1, 4));
  } else if (dimension == 3) {
    pts.push_back(Eigen::Vector3d(5, 4, -1));
  }
  return pts;
}

std::vector<Eigen::VectorXd> StateSampler::states(int count) {
  std::vector<Eigen::VectorXd> out = probePoints(dim_);
  out.reserve(out.size() + static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(next());
  return out;
}

namespace {

void requireShape(const ExprMatrix& m, int rows, int cols, const std::string& field) {
  if (m.rows != rows || m.cols != cols)
    throw SpecError(field + ": expected " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", got " + std::to_string(m.rows) + "x" +
                    std::to_string(m.cols));
}

void requireVariablesInRange(const Expr& e, int n, const std::string& field) {
  if (e.maxVariableIndex() > n)
    throw SpecError(field + ": references x" + std::to_string(e.maxVariableIndex()) +
                    " beyond dimension " + std::to_string(n));
}

// Symmetric elimination pivot test: a symmetric matrix is positive definite
// iff every pivot of the (unpivoted) LDL^T factorization is positive, which
// is equivalent to all leading principal minors being positive.
bool positivePivots(Eigen::MatrixXd a, double* worstPivot) {
  const int n = static_cast<int>(a.rows());
  *worstPivot = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    double pivot = a(k, k);
    *worstPivot = std::min(*worstPivot, pivot);
    if (!(pivot > 0.0)) return false;
    for (int i = k + 1; i < n; ++i) {
      double factor = a(i, k) / pivot;
      for (int j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return true;
}

bool isSymmetric(const Eigen::MatrixXd& a, double scale) {
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + scale);
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec, StateSampler& sampler, int count) {
  if (count < 1) throw SpecError("validation sample count must be >= 1");
  const int n = spec.n;
  if (n < 1) throw SpecError("n: state dimension must be >= 1");
  if (spec.m < 1) throw SpecError("m: disturbance dimension must be >= 1");
  if (spec.p < 1) throw SpecError("p: control dimension must be >= 1");
  if (!(spec.alpha1 > 0)) throw SpecError("alpha1: must be > 0");
  if (!(spec.alpha2 > 0)) throw SpecError("alpha2: must be > 0");
  if (!(spec.b > 0)) throw SpecError("b: must be > 0");
  requireShape(spec.g1, n, spec.m, "g1");
  requireShape(spec.g2, n, spec.p, "g2");
  requireShape(spec.E, n, n, "E");
  if (static_cast<int>(spec.gamma.size()) != n)
    throw SpecError("gamma: expected " + std::to_string(n) + " entries, got " +
                    std::to_string(spec.gamma.size()));
  requireVariablesInRange(spec.V, n, "value_function");
  for (const auto& e : spec.g1.entries) requireVariablesInRange(e, n, "g1");
  for (const auto& e : spec.g2.entries) requireVariablesInRange(e, n, "g2");
  for (const auto& e : spec.E.entries) requireVariablesInRange(e, n, "E");
  for (const auto& e : spec.gamma) requireVariablesInRange(e, n, "gamma");
  if (sampler.dimension() != n) throw SpecError("sampler dimension does not match n");

  ValidationReport report;
  report.checks.push_back(
      {"dimensions-consistent", true, 0.0, Eigen::VectorXd::Zero(n)});

  const ExprVector vx = gradient(spec.V, n);
  const std::vector<Eigen::VectorXd> samples = sampler.states(count);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);

  // Value function: V(0) = 0 and V > 0 away from the origin.
  {
    ValidationCheck check{"value-function-positive-definite", true, 0.0, origin};
    double v0 = std::abs(evalScalar(spec.V, origin));
    if (v0 > 1e-12) {
      check.passed = false;
      check.worst = v0;
    }
    for (const auto& x : samples) {
      if (x.isZero()) continue;
      double v = evalScalar(spec.V, x);
      if (!(v > 0.0) && -v >= check.worst) {
        check.passed = false;
        check.worst = -v;
        check.witness = x;
      }
    }
    report.checks.push_back(std::move(check));
  }

  // Gradient nonvanishing away from the origin.
  {
    ValidationCheck check{"gradient-nonvanishing", true, 0.0, origin};
    for (const auto& x : samples) {
      if (x.isZero()) continue;
      double norm = evalVector(vx, x).norm();
      if (norm == 0.0) {
        check.passed = false;
        check.witness = x;
      }
    }
    report.checks.push_back(std::move(check));
  }

  // E symmetric positive definite. Constant matrices get the exact pivot
  // test; state-dependent ones are checked at the sampled states.
  {
    ValidationCheck check{"E-positive-definite", true, 0.0, origin};
    auto checkAt = [&](const Eigen::VectorXd& x) {
      Eigen::MatrixXd e = evalMatrix(spec.E, x);
      double worstPivot = 0.0;
      bool ok = isSymmetric(e, e.cwiseAbs().maxCoeff()) && positivePivots(e, &worstPivot);
      if (!ok && (check.passed || -worstPivot > check.worst)) {
        check.passed = false;
        check.worst = std::max(0.0, -worstPivot);
        check.witness = x;
      }
    };
    if (spec.E.isConstant()) {
      checkAt(origin);
    } else {
      for (const auto& x : samples) checkAt(x);
    }
    report.checks.push_back(std::move(check));
  }

  // gamma orthogonal to the gradient of V at every sampled state.
  {
    ValidationCheck check{"gamma-orthogonal-to-gradient", true, 0.0, origin};
    for (const auto& x : samples) {
      Eigen::VectorXd g = evalVector(vx, x);
      Eigen::VectorXd gm = evalVector(spec.gamma, x);
      double inner = std::abs(g.dot(gm));
      double allowed = 1e-9 * (1.0 + g.norm() * gm.norm());
      double excess = inner - allowed;
      if (excess > 0.0 && excess > check.worst) {
        check.passed = false;
        check.worst = excess;
        check.witness = x;
      }
    }
    report.checks.push_back(std::move(check));
  }

  return report;
}

ValidationReport validate(const ProblemSpec& spec, int count) {
  StateSampler sampler(spec.n);
  return validate(spec, sampler, count);
}

}  // namespace consyn
