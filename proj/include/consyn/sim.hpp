#ifndef CONSYN_SIM_HPP
#define CONSYN_SIM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "consyn/system_model.hpp"

namespace consyn {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ControlMode { openLoop, optimal };
enum class DisturbanceMode { zero, worstCase, uniformRandom };

struct SimConfig {
  Eigen::VectorXd x0;
  double T = 0;
  double dt = 1e-3;
  ControlMode control = ControlMode::openLoop;
  DisturbanceMode disturbance = DisturbanceMode::zero;
  double lo = 0;  // uniformRandom bounds
  double hi = 0;
  std::uint64_t seed = 0;
  int recordEvery = 10;
};

struct TrajectoryPoint {
  double t = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd w;
  double V = 0;
  double q = 0;
  double stageCost = 0;  // q + u'u - w'w
  double J = 0;          // running integral of the stage cost
  bool inX = false;
};

struct TrajectoryRecord {
  std::vector<TrajectoryPoint> points;
  bool completed = true;   // false when a non-finite state aborted the run
  double abortTime = 0;    // time of the aborted step when !completed
};

/// Fixed-step classical Runge-Kutta integration of
///   xdot = f(x) + g1(x) w + g2(x) u
/// with u and w frozen at their step-start values within each step.
/// Controls come from the configured mode (open loop or saturated u*);
/// disturbances are zero, the saturated worst case w*, or per-step uniform
/// draws clipped into the alpha1 ball. The running cost J is integrated
/// alongside the state by the same scheme. Identical configs (including
/// seeds) produce bit-identical records.
TrajectoryRecord integrate(const SystemDefinition& system, const SimConfig& config);

struct CostIdentityResult {
  double lhs = 0;        // V(x0) - V(x(T))
  double rhs = 0;        // J(T)
  double deviation = 0;  // |lhs - rhs|
  bool applicable = true;  // false when the trajectory left X
  double exitTime = 0;     // first recorded time outside X when !applicable
  TrajectoryRecord trajectory;
};

/// Integrates optimal play (unsaturated u*, w*) from x0 and compares the
/// decrease of V with the accumulated stage cost. Valid only while the
/// trajectory stays inside X; leaving X yields an identity-not-applicable
/// result with the exit time rather than a failure.
CostIdentityResult costIdentityCheck(const SystemDefinition& system,
                                     const Eigen::VectorXd& x0, double T, double dt);

/// Writes the record as CSV with header
/// t,x1..xn,u1..up,w1..wm,V,q,stage_cost,J,in_X, 17 significant digits
/// per value, one row per recorded step.
void writeTrajectoryCsv(const TrajectoryRecord& record, const std::string& path);

}  // namespace consyn

#endif  // CONSYN_SIM_HPP
