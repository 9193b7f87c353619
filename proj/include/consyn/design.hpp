#ifndef CONSYN_DESIGN_HPP
#define CONSYN_DESIGN_HPP

#include <stdexcept>

#include "consyn/system_model.hpp"

namespace consyn {

/// Internal consistency failure while assembling a system (the two
/// independently built routes to the dynamics disagree).
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scalar coefficient of the normalized gradient term,
/// k = (alpha1^2 / 3) * (1 + 1 / b^2).
double gainK(const ProblemSpec& spec);

/// P = alpha2 * g2 g2' + k / (1 + Vx'Vx) * I + E, as a symbolic matrix.
ExprMatrix buildP(const ProblemSpec& spec);

/// h = 1/4 g2 g2' Vx + 1/2 g1 g1' Vx + P Vx + gamma.
ExprVector buildH(const ProblemSpec& spec);

/// Assembles the full system:
///   f = -3/4 g1 g1' Vx - alpha2 g2 g2' Vx - k / (1 + Vx'Vx) Vx - E Vx + gamma
///   q = Vx' h
/// The dynamics are built twice, once from the expanded terms above and
/// once by composing through h, and the two routes are cross-checked at
/// sampled states (scaled 1e-12); disagreement throws SynthesisError.
SystemDefinition synthesize(const ProblemSpec& spec);

/// Returns q = Vx'h after asserting q(0) = 0 and q > 0 at sampled states
/// away from the origin; a violation throws SynthesisError.
Expr admissibleUtility(const SystemDefinition& system);

}  // namespace consyn

#endif  // CONSYN_DESIGN_HPP
