#ifndef CONSYN_ANALYSIS_HPP
#define CONSYN_ANALYSIS_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "consyn/system_model.hpp"

namespace consyn {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vx'f + 1/4 Vx'(g1 g1' - g2 g2')Vx + q at x. Zero (to rounding) for
/// every synthesized system, at every state.
double hjiResidual(const SystemDefinition& system, const Eigen::VectorXd& x);

/// Residual of the saturated optimality equation,
///   ||u* + 1/2 g2'Vx||^2 - ||w* - 1/2 g1'Vx||^2
///     + Vx'f + 1/4 Vx'(g1 g1' - g2 g2')Vx + q,
/// with u*, w* the saturated policies. Inside X the squared terms vanish,
/// so the value coincides with hjiResidual there.
double saturatedHamiltonianResidual(const SystemDefinition& system,
                                    const Eigen::VectorXd& x);

/// Closed-form inf over ||u|| < alpha2 of sup over ||w|| < alpha1 of the
/// Lie derivative Vx'(f + g1 w + g2 u). Two algebraically equivalent forms
/// are evaluated (one through Vx'h, one through Vx'P Vx) and must agree to
/// scaled 1e-9; disagreement throws AnalysisError.
double infSupLieDerivative(const SystemDefinition& system, const Eigen::VectorXd& x);

/// Grid oracle for the same inf-sup: minimizes over sampled controls the
/// maximum over sampled disturbances of the Lie derivative evaluated
/// directly. The grid always contains the analytic optimizer directions,
/// so the result matches infSupLieDerivative up to rounding.
double bruteForceInfSup(const SystemDefinition& system, const Eigen::VectorXd& x,
                        int gridDensity);

enum class LevelMethod { analyticQuadratic, sampled };

/// Sublevel threshold c such that (on the checked samples) every state with
/// V(x) > c has gradient norm above b.
struct RclfRegion {
  double b = 0;
  double c = 0;
  LevelMethod method = LevelMethod::sampled;
  double inflation = 1.0;  // safety factor applied by the sampled estimator
};

/// For V = 1/2 x'Qx with a constant positive definite Q (detected
/// structurally) returns the tight analytic level c = b^2 / (2 lambda_min(Q));
/// for identity Q this is b^2/2. Otherwise returns a sampled estimate:
/// the largest V over sampled states with ||Vx|| <= b, inflated by 10%.
RclfRegion estimateC(const ProblemSpec& spec, double b);

struct AnalysisSample {
  Eigen::VectorXd x;
  double hji = 0;
  double infSup = 0;
  bool inX = false;
  double V = 0;
  double gradNorm = 0;
};

struct AnalysisViolation {
  std::string check;
  Eigen::VectorXd x;
  double value = 0;
};

struct AnalysisReport {
  std::vector<AnalysisSample> samples;
  std::vector<AnalysisViolation> violations;
  int checkedAboveLevel = 0;       // samples with V > c
  double worstInfSupAboveLevel = 0;  // largest inf-sup among those samples
  double worstAbsHji = 0;
  bool certified() const { return violations.empty(); }
};

/// Certifies the robust-stabilizability condition on sampled states: for
/// every sample with V(x) > region.c,
///   - infSupLieDerivative(x) < 0,
///   - alpha1^2/3 - alpha2 ||g2'Vx|| < Vx'P Vx, and
///   - infSupLieDerivative(x) <= alpha1^2/3 - alpha2 ||g2'Vx|| - Vx'P Vx
///     (the parabola-vertex bound), up to scaled 1e-9.
/// Violations are reported with witness states.
AnalysisReport rclfCertify(const SystemDefinition& system, const RclfRegion& region,
                           StateSampler& sampler, int count);

}  // namespace consyn

#endif  // CONSYN_ANALYSIS_HPP
