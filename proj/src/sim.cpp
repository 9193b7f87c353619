#include "consyn/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include "consyn/policy.hpp"

namespace consyn {

namespace {

// Supplies the frozen (u, w) pair for the step starting at x.
using StepPolicy =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& u, Eigen::VectorXd& w)>;

TrajectoryRecord integrateWithPolicy(const SystemDefinition& sys,
                                     const Eigen::VectorXd& x0, double T, double dt,
                                     int recordEvery, const StepPolicy& policy) {
  const DomainX domain(sys.spec);
  const long long steps = std::llround(T / dt);

  TrajectoryRecord record;
  Eigen::VectorXd x = x0;
  double J = 0.0;
  Eigen::VectorXd u(sys.spec.p), w(sys.spec.m);

  auto dynamicsAt = [&](const Eigen::VectorXd& state) {
    return Eigen::VectorXd(evalVector(sys.f, state) +
                           evalMatrix(sys.spec.g1, state) * w +
                           evalMatrix(sys.spec.g2, state) * u);
  };
  auto stageCostAt = [&](const Eigen::VectorXd& state) {
    return evalScalar(sys.q, state) + u.squaredNorm() - w.squaredNorm();
  };
  auto recordPoint = [&](double t) {
    TrajectoryPoint pt;
    pt.t = t;
    pt.x = x;
    pt.u = u;
    pt.w = w;
    pt.V = evalScalar(sys.spec.V, x);
    pt.q = evalScalar(sys.q, x);
    pt.stageCost = pt.q + u.squaredNorm() - w.squaredNorm();
    pt.J = J;
    pt.inX = domain.contains(x);
    record.points.push_back(std::move(pt));
  };

  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    policy(x, u, w);
    if (k % recordEvery == 0) recordPoint(t);

    // Classical RK4 on the state, with the running cost integrated by the
    // same scheme as an extra quadrature state.
    Eigen::VectorXd k1 = dynamicsAt(x);
    double s1 = stageCostAt(x);
    Eigen::VectorXd k2 = dynamicsAt(x + 0.5 * dt * k1);
    double s2 = stageCostAt(x + 0.5 * dt * k1);
    Eigen::VectorXd k3 = dynamicsAt(x + 0.5 * dt * k2);
    double s3 = stageCostAt(x + 0.5 * dt * k2);
    Eigen::VectorXd k4 = dynamicsAt(x + dt * k3);
    double s4 = stageCostAt(x + dt * k3);

    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    J += dt / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);

    if (!x.allFinite() || !std::isfinite(J)) {
      record.completed = false;
      record.abortTime = static_cast<double>(k + 1) * dt;
      return record;
    }
  }

  policy(x, u, w);
  recordPoint(static_cast<double>(steps) * dt);
  return record;
}

}  // namespace

TrajectoryRecord integrate(const SystemDefinition& system, const SimConfig& config) {
  if (config.x0.size() != system.spec.n)
    throw SimError("x0: expected dimension " + std::to_string(system.spec.n) +
                   ", got " + std::to_string(config.x0.size()));
  if (!(config.T > 0)) throw SimError("T must be > 0");
  if (!(config.dt > 0) || config.dt > config.T)
    throw SimError("dt must satisfy 0 < dt <= T");
  if (config.recordEvery < 1) throw SimError("recordEvery must be >= 1");
  if (config.disturbance == DisturbanceMode::uniformRandom && config.lo > config.hi)
    throw SimError("uniform disturbance requires lo <= hi");

  PolicyPair policies = saturatedPolicies(system);
  std::mt19937_64 rng(config.seed);
  auto uniform = [&rng](double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };

  const int m = system.spec.m;
  const double alpha1 = system.spec.alpha1;
  StepPolicy policy = [&, m, alpha1](const Eigen::VectorXd& x, Eigen::VectorXd& u,
                                     Eigen::VectorXd& w) {
    u = config.control == ControlMode::optimal ? policies.uStar(x)
                                               : Eigen::VectorXd::Zero(system.spec.p);
    switch (config.disturbance) {
      case DisturbanceMode::zero:
        w = Eigen::VectorXd::Zero(m);
        break;
      case DisturbanceMode::worstCase:
        w = policies.wStar(x);
        break;
      case DisturbanceMode::uniformRandom: {
        Eigen::VectorXd raw(m);
        for (int i = 0; i < m; ++i) raw[i] = uniform(config.lo, config.hi);
        w = sat(raw, alpha1);
        break;
      }
    }
  };

  return integrateWithPolicy(system, config.x0, config.T, config.dt,
                             config.recordEvery, policy);
}

CostIdentityResult costIdentityCheck(const SystemDefinition& system,
                                     const Eigen::VectorXd& x0, double T, double dt) {
  if (x0.size() != system.spec.n) throw SimError("x0 dimension mismatch");
  if (!(T > 0) || !(dt > 0) || dt > T) throw SimError("need 0 < dt <= T");

  PolicyPair policies = unsaturatedPolicies(system);
  StepPolicy policy = [&](const Eigen::VectorXd& x, Eigen::VectorXd& u,
                          Eigen::VectorXd& w) {
    u = policies.uStar(x);
    w = policies.wStar(x);
  };

  CostIdentityResult result;
  if (!inDomainX(system.spec, x0)) {
    result.applicable = false;
    result.exitTime = 0.0;
    return result;
  }
  // Every step is recorded so the X-membership check covers the whole run.
  result.trajectory = integrateWithPolicy(system, x0, T, dt, 1, policy);

  for (const auto& pt : result.trajectory.points) {
    if (!pt.inX) {
      result.applicable = false;
      result.exitTime = pt.t;
      return result;
    }
  }
  if (!result.trajectory.completed) {
    result.applicable = false;
    result.exitTime = result.trajectory.abortTime;
    return result;
  }

  const TrajectoryPoint& first = result.trajectory.points.front();
  const TrajectoryPoint& last = result.trajectory.points.back();
  result.lhs = first.V - last.V;
  result.rhs = last.J;
  result.deviation = std::abs(result.lhs - result.rhs);
  return result;
}

void writeTrajectoryCsv(const TrajectoryRecord& record, const std::string& path) {
  if (record.points.empty()) throw SimError("empty trajectory record");
  std::ofstream out(path);
  if (!out) throw SimError("cannot open '" + path + "' for writing");

  const auto& first = record.points.front();
  out << "t";
  for (int i = 1; i <= first.x.size(); ++i) out << ",x" << i;
  for (int i = 1; i <= first.u.size(); ++i) out << ",u" << i;
  for (int i = 1; i <= first.w.size(); ++i) out << ",w" << i;
  out << ",V,q,stage_cost,J,in_X\n";

  char buf[40];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (const auto& pt : record.points) {
    std::snprintf(buf, sizeof(buf), "%.17g", pt.t);
    out << buf;
    for (Eigen::Index i = 0; i < pt.x.size(); ++i) emit(pt.x[i]);
    for (Eigen::Index i = 0; i < pt.u.size(); ++i) emit(pt.u[i]);
    for (Eigen::Index i = 0; i < pt.w.size(); ++i) emit(pt.w[i]);
    emit(pt.V);
    emit(pt.q);
    emit(pt.stageCost);
    emit(pt.J);
    out << ',' << (pt.inX ? '1' : '0') << '\n';
  }
}

}  // namespace consyn
