// Acceptance suite: runs every shipped correctness criterion end to end
// against the committed benchmark configs and prints one line per check.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "consyn/analysis.hpp"
#include "consyn/config_io.hpp"
#include "consyn/design.hpp"
#include "consyn/policy.hpp"
#include "consyn/sim.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"

using namespace consyn;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

SystemDefinition loadSystem(const std::string& file) {
  LoadedConfig cfg = loadConfigFile(std::string(CONSYN_CONFIG_DIR) + "/" + file);
  if (!validate(cfg.spec, 200).allPassed())
    throw std::runtime_error(file + ": spec failed validation");
  return synthesize(cfg.spec);
}

bool hjiIdentity(const SystemDefinition& sys, double& worst) {
  StateSampler sampler(sys.spec.n, 42);
  worst = 0.0;
  for (const auto& x : sampler.states(1000)) {
    double q = evalScalar(sys.q, x);
    double scaled = std::abs(hjiResidual(sys, x)) / (1.0 + std::abs(q));
    worst = std::max(worst, scaled);
  }
  return worst <= 1e-9;
}

bool oracleEquivalence(const SystemDefinition& sys, double& worst) {
  StateSampler sampler(sys.spec.n, 42);
  worst = 0.0;
  for (const auto& x : sampler.states(200)) {
    double closed = infSupLieDerivative(sys, x);
    double oracle = bruteForceInfSup(sys, x, 64);
    worst = std::max(worst, std::abs(closed - oracle) / (1.0 + std::abs(closed)));
  }
  return worst <= 1e-9;
}

bool rclfNegativity(const SystemDefinition& sys, int& checked, double& worstInfSup) {
  const double c = 0.25;
  const double a1 = sys.spec.alpha1;
  const double a2 = sys.spec.alpha2;
  StateSampler sampler(sys.spec.n, 42);
  checked = 0;
  worstInfSup = -std::numeric_limits<double>::infinity();
  while (checked < 1000) {
    Eigen::VectorXd x = sampler.next();
    if (evalScalar(sys.spec.V, x) <= c) continue;
    ++checked;
    double infSup = infSupLieDerivative(sys, x);
    worstInfSup = std::max(worstInfSup, infSup);
    if (!(infSup < 0.0)) return false;
    Eigen::VectorXd vx = evalVector(sys.Vx, x);
    double s2 = (evalMatrix(sys.spec.g2, x).transpose() * vx).norm();
    double vPv = vx.dot(evalMatrix(sys.P, x) * vx);
    if (!(a1 * a1 / 3.0 - a2 * s2 < vPv)) return false;
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;
  const SystemDefinition sysA = loadSystem("sysA-2d.json");
  const SystemDefinition sysB = loadSystem("sysB-3d.json");

  criteria.push_back({"01 optimality identity on sampled states", [&](std::string& d) {
    double worstA = 0, worstB = 0;
    bool ok = hjiIdentity(sysA, worstA) && hjiIdentity(sysB, worstB);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst scaled residual 2d %.3e, 3d %.3e", worstA,
                  worstB);
    d = buf;
    return ok;
  }});

  criteria.push_back({"02 inf-sup closed form matches grid oracle", [&](std::string& d) {
    double worstA = 0, worstB = 0;
    bool ok = oracleEquivalence(sysA, worstA) && oracleEquivalence(sysB, worstB);
    double spot1 = infSupLieDerivative(sysA, Eigen::Vector2d(1, 0));
    double spot2 = infSupLieDerivative(sysA, Eigen::Vector2d(0, 1));
    ok = ok && std::abs(spot1 - (-90.75)) <= 1e-9 * (1 + 90.75) &&
         std::abs(spot2 - (-38.75)) <= 1e-9 * (1 + 38.75);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst gap 2d %.3e, 3d %.3e; spots %.6f / %.6f", worstA, worstB,
                  spot1, spot2);
    d = buf;
    return ok;
  }});

  criteria.push_back({"03 stabilizability certificate above V = 0.25",
                      [&](std::string& d) {
    int checkedA = 0, checkedB = 0;
    double worstA = 0, worstB = 0;
    bool ok = rclfNegativity(sysA, checkedA, worstA) &&
              rclfNegativity(sysB, checkedB, worstB);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "checked %d + %d samples, worst inf-sup %.4g / %.4g", checkedA,
                  checkedB, worstA, worstB);
    d = buf;
    return ok;
  }});

  criteria.push_back({"04 synthesized dynamics match the printed closed forms",
                      [&](std::string& d) {
    double worst = 0.0;
    StateSampler s2(2, 42);
    for (const auto& x : s2.states(100)) {
      Eigen::VectorXd f = evalVector(sysA.f, x);
      Eigen::Vector2d g = testing::golden2dDynamics(x);
      for (int i = 0; i < 2; ++i)
        worst = std::max(worst, std::abs(f[i] - g[i]) / (1.0 + std::abs(g[i])));
    }
    StateSampler s3(3, 42);
    for (const auto& x : s3.states(100)) {
      Eigen::VectorXd f = evalVector(sysB.f, x);
      Eigen::Vector3d g = testing::golden3dDynamics(x);
      for (int i = 0; i < 3; ++i)
        worst = std::max(worst, std::abs(f[i] - g[i]) / (1.0 + std::abs(g[i])));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst scaled mismatch %.3e", worst);
    d = buf;
    return worst <= 1e-9;
  }});

  criteria.push_back({"05 open-loop transients decay monotonically",
                      [&](std::string& d) {
    double worstTerminal = 0.0;
    for (const Eigen::Vector2d& x0 :
         {Eigen::Vector2d(3, -2), Eigen::Vector2d(-5, 5), Eigen::Vector2d(1, 4)}) {
      SimConfig cfg;
      cfg.x0 = x0;
      cfg.T = 2.0;
      cfg.dt = 1e-3;
      cfg.control = ControlMode::openLoop;
      cfg.disturbance = DisturbanceMode::zero;
      TrajectoryRecord rec = integrate(sysA, cfg);
      if (!rec.completed) return false;
      for (std::size_t i = 1; i < rec.points.size(); ++i)
        if (!(rec.points[i].V < rec.points[i - 1].V)) return false;
      double v0 = rec.points.front().V;
      worstTerminal = std::max(worstTerminal, rec.points.back().V / v0);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst V(T)/V(0) = %.3e", worstTerminal);
    d = buf;
    return worstTerminal <= 1e-6;
  }});

  criteria.push_back({"06 disturbed closed loop converges near the origin",
                      [&](std::string& d) {
    LoadedConfig cfg = loadConfigFile(std::string(CONSYN_CONFIG_DIR) + "/sysB-3d.json");
    TrajectoryRecord rec = integrate(sysB, *cfg.simulation);
    if (!rec.completed) return false;
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "consyn_acceptance";
    fs::create_directories(dir);
    writeTrajectoryCsv(rec, (dir / "sysB_closed_loop.csv").string());
    double terminal = rec.points.back().x.norm();
    char buf[96];
    std::snprintf(buf, sizeof(buf), "|x(10)| = %.4g, csv at %s", terminal,
                  (dir / "sysB_closed_loop.csv").c_str());
    d = buf;
    return terminal <= 0.5;
  }});

  criteria.push_back({"07 cost identity under optimal play", [&](std::string& d) {
    CostIdentityResult r = costIdentityCheck(sysA, Eigen::Vector2d(1, 0), 2.0, 1e-3);
    for (const auto& pt : r.trajectory.points)
      if (!pt.inX) return false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "lhs %.9g rhs %.9g deviation %.3e", r.lhs, r.rhs,
                  r.deviation);
    d = buf;
    return r.applicable && r.deviation <= 1e-3 * 0.5;
  }});

  criteria.push_back({"08 symbolic gradients match finite differences",
                      [&](std::string& d) {
    double worst = 0.0;
    for (const SystemDefinition* sys : {&sysA, &sysB}) {
      StateSampler sampler(sys->spec.n, 17, 2.0);
      for (const auto& ex : sampler.states(50)) {
        std::vector<double> x(ex.data(), ex.data() + ex.size());
        for (int var = 1; var <= sys->spec.n; ++var) {
          double sym = sys->spec.V.diff(var).eval(x);
          double fd = testing::centralDifference(sys->spec.V, var, x);
          double v = std::abs(evalScalar(sys->spec.V, ex));
          worst = std::max(worst, std::abs(sym - fd) / (1.0 + v));
        }
      }
    }
    testing::ExprGen gen(2024, 3, /*allowDivision=*/false);
    int checked = 0;
    while (checked < 1000) {
      Expr e = gen.next(6);
      std::vector<double> x = gen.point();
      double value = e.eval(x);
      if (!std::isfinite(value)) continue;
      ++checked;
      for (int var = 1; var <= 3; ++var) {
        double sym = e.diff(var).eval(x);
        double fd = testing::centralDifference(e, var, x);
        worst = std::max(worst, std::abs(sym - fd) / (1.0 + std::abs(value)));
      }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst scaled gradient error %.3e", worst);
    d = buf;
    return worst <= 1e-6;
  }});

  criteria.push_back({"09 integrator shows 4th-order step behavior",
                      [&](std::string& d) {
    auto terminal = [&](double dt) {
      SimConfig cfg;
      cfg.x0 = Eigen::Vector2d(3, -2);
      cfg.T = 0.05;
      cfg.dt = dt;
      cfg.control = ControlMode::openLoop;
      cfg.disturbance = DisturbanceMode::zero;
      return Eigen::Vector2d(integrate(sysA, cfg).points.back().x);
    };
    Eigen::Vector2d ref = terminal(1e-4);
    double coarse = (terminal(2e-3) - ref).norm();
    double fine = (terminal(1e-3) - ref).norm();
    double ratio = coarse / fine;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "error ratio %.2f (expect 8..32)", ratio);
    d = buf;
    return ratio >= 8.0 && ratio <= 32.0;
  }});

  criteria.push_back({"10 saturation operator properties", [&](std::string& d) {
    std::mt19937_64 rng(424242);
    auto uniform = [&rng](double lo, double hi) {
      return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 10000; ++trial) {
      int dim = 1 + static_cast<int>(rng() % 4);
      Eigen::VectorXd y(dim);
      for (int i = 0; i < dim; ++i) y[i] = uniform(-25.0, 25.0);
      double alpha = uniform(1e-3, 12.0);
      Eigen::VectorXd s = sat(y, alpha);
      if (!(s.norm() <= alpha)) return false;
      if (y.norm() < alpha && s != y) return false;
      if (y.norm() > 0.0) {
        double c = s.dot(y) / y.squaredNorm();
        if (c < 0.0) return false;
        if ((s - c * y).norm() > 1e-12 * (1.0 + y.norm())) return false;
      }
    }
    d = "10000 random (y, alpha) pairs";
    return true;
  }});

  int failures = 0;
  for (auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", criterion.name.c_str(),
                detail.empty() ? "" : " - ", detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
