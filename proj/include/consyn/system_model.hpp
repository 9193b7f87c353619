#ifndef CONSYN_SYSTEM_MODEL_HPP
#define CONSYN_SYSTEM_MODEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "consyn/expr.hpp"

namespace consyn {

/// Structural problem-definition error (bad dimensions, missing fields).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ExprVector = std::vector<Expr>;

/// Dense row-major matrix of expressions.
struct ExprMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Expr> entries;

  ExprMatrix() = default;
  ExprMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c) {}

  Expr& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * cols + j]; }
  const Expr& operator()(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * cols + j];
  }

  /// True when no entry references a state variable.
  bool isConstant() const;
};

double evalScalar(const Expr& e, const Eigen::VectorXd& x);
Eigen::VectorXd evalVector(const ExprVector& v, const Eigen::VectorXd& x);
Eigen::MatrixXd evalMatrix(const ExprMatrix& m, const Eigen::VectorXd& x);

/// User inputs of the construction: value function, coupling matrices,
/// norm bounds and the free design parameters. Immutable after assembly;
/// `validate` checks the semantic invariants.
struct ProblemSpec {
  int n = 0;  // state dimension
  int m = 0;  // disturbance dimension
  int p = 0;  // control dimension

  Expr V;             // value function over x1..xn
  ExprMatrix g1;      // n x m disturbance coupling
  ExprMatrix g2;      // n x p input coupling
  ExprMatrix E;       // n x n positive definite design matrix
  ExprVector gamma;   // length n, orthogonal to the gradient of V
  double alpha1 = 0;  // disturbance norm bound, > 0
  double alpha2 = 0;  // control norm bound, > 0
  double b = 0;       // gradient lower-bound parameter, > 0
};

/// A synthesized system: internal dynamics plus every quantity the
/// construction derives along the way.
struct SystemDefinition {
  ProblemSpec spec;
  ExprVector f;   // internal dynamics, f(0) = 0
  ExprVector h;   // design vector with q = Vx'h
  ExprMatrix P;   // n x n design matrix
  Expr q;         // utility function, q(0) = 0
  ExprVector Vx;  // gradient of V
  double k = 0;   // scalar coefficient of the normalized gradient term
  double crossCheckDeviation = 0;  // worst disagreement of the two f routes
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double worst = 0;  // magnitude of the worst violation (0 when passed)
  Eigen::VectorXd witness;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool allPassed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Deterministic uniform sampler over the box [-halfWidth, halfWidth]^n.
/// `states` prepends a few fixed probe points for the shipped benchmark
/// dimensions so known-interesting states are always covered. Draws are
/// derived from the raw engine bits, so a given seed reproduces the same
/// sequence everywhere.
class StateSampler {
 public:
  explicit StateSampler(int dimension, std::uint64_t seed = 42, double halfWidth = 10.0);

  Eigen::VectorXd next();
  std::vector<Eigen::VectorXd> states(int count);

  int dimension() const { return dim_; }
  double halfWidth() const { return halfWidth_; }

  static std::vector<Eigen::VectorXd> probePoints(int dimension);

 private:
  int dim_;
  double halfWidth_;
  std::mt19937_64 rng_;
};

/// Checks every ProblemSpec invariant on `count` sampled states:
/// dimension consistency (structural, throws SpecError naming the field),
/// positive definiteness of V, nonvanishing gradient away from the origin,
/// symmetric positive definiteness of E (exact pivot test when E is
/// constant, sampled otherwise) and orthogonality of gamma to the gradient.
ValidationReport validate(const ProblemSpec& spec, StateSampler& sampler, int count);

/// Convenience overload with the default sampler (seed 42, box half-width 10).
ValidationReport validate(const ProblemSpec& spec, int count = 1000);

}  // namespace consyn

#endif  // CONSYN_SYSTEM_MODEL_HPP
