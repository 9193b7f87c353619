#ifndef CONSYN_POLICY_HPP
#define CONSYN_POLICY_HPP

#include <Eigen/Dense>
#include <functional>

#include "consyn/system_model.hpp"

namespace consyn {

/// Radial projection onto the closed norm ball of radius alpha:
/// y when ||y|| < alpha, otherwise alpha * y / ||y||. The returned norm
/// never exceeds alpha.
Eigen::VectorXd sat(const Eigen::VectorXd& y, double alpha);

enum class PolicyMode { saturated, unsaturated };

/// Optimal control and worst-case disturbance as callable policies.
/// Both closures capture the symbolic g1'Vx and g2'Vx and evaluate them
/// numerically per call; PolicyPair values are immutable and shareable.
struct PolicyPair {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> uStar;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> wStar;
  PolicyMode mode = PolicyMode::saturated;
};

/// u* = -sat_{alpha2}(1/2 g2'Vx), w* = sat_{alpha1}(1/2 g1'Vx).
PolicyPair saturatedPolicies(const SystemDefinition& system);

/// u* = -1/2 g2'Vx, w* = 1/2 g1'Vx. Intended for states inside the
/// constraint-inactive region X; evaluation elsewhere is permitted and
/// simply differs from the saturated pair.
PolicyPair unsaturatedPolicies(const SystemDefinition& system);

/// Membership predicate for the open region X where both norm
/// constraints are inactive:
/// ||1/2 g2'Vx|| < alpha2 and ||1/2 g1'Vx|| < alpha1 (strict).
class DomainX {
 public:
  explicit DomainX(const ProblemSpec& spec);
  bool contains(const Eigen::VectorXd& x) const;

 private:
  ExprVector g1tVx_;
  ExprVector g2tVx_;
  double alpha1_;
  double alpha2_;
};

bool inDomainX(const ProblemSpec& spec, const Eigen::VectorXd& x);

}  // namespace consyn

#endif  // CONSYN_POLICY_HPP
