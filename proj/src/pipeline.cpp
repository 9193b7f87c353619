#include "consyn/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "consyn/analysis.hpp"
#include "consyn/design.hpp"
#include "consyn/policy.hpp"
#include "consyn/sim.hpp"

namespace consyn {

namespace {

std::vector<double> toStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void ensureDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
}

nlohmann::json violationsToJson(const std::vector<VerifyViolation>& violations) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : violations)
    out.push_back({{"check", v.check}, {"witness", v.witness}, {"value", v.value}});
  return out;
}

}  // namespace

VerifyOutcome verifySystem(const SystemDefinition& system, const VerifyOptions& options) {
  VerifyOutcome outcome;
  outcome.samples = options.samples;
  const ProblemSpec& spec = system.spec;

  {
    StateSampler sampler(spec.n, options.seed, options.boxHalfWidth);
    outcome.validation = validate(spec, sampler, options.samples);
  }

  StateSampler sampler(spec.n, options.seed, options.boxHalfWidth);
  const std::vector<Eigen::VectorXd> samples = sampler.states(options.samples);

  // Optimality identity and inf-sup oracle agreement at every sample.
  for (const auto& x : samples) {
    double q = evalScalar(system.q, x);
    double residual = hjiResidual(system, x);
    double scaled = std::abs(residual) / (1.0 + std::abs(q));
    outcome.worstHjiScaled = std::max(outcome.worstHjiScaled, scaled);
    if (scaled > 1e-9)
      outcome.violations.push_back({"hji-residual", toStd(x), residual});

    double closed = infSupLieDerivative(system, x);
    double oracle = bruteForceInfSup(system, x, options.gridDensity);
    double gap = std::abs(closed - oracle) / (1.0 + std::abs(closed));
    outcome.worstOracleScaled = std::max(outcome.worstOracleScaled, gap);
    if (gap > 1e-9)
      outcome.violations.push_back({"inf-sup-oracle", toStd(x), closed - oracle});
  }

  // Robust-stabilizability certificate above the estimated level set.
  RclfRegion region = estimateC(spec, spec.b);
  outcome.levelC = region.c;
  outcome.levelInflation = region.inflation;
  outcome.levelMethod =
      region.method == LevelMethod::analyticQuadratic ? "analytic-quadratic" : "sampled";
  {
    StateSampler rclfSampler(spec.n, options.seed, options.boxHalfWidth);
    outcome.rclf = rclfCertify(system, region, rclfSampler, options.samples);
    for (const auto& v : outcome.rclf.violations)
      outcome.violations.push_back({v.check, toStd(v.x), v.value});
  }

  // Open-loop Lyapunov decrease away from the origin.
  bool first = true;
  for (const auto& x : samples) {
    if (x.isZero()) continue;
    double vdot = evalVector(system.Vx, x).dot(evalVector(system.f, x));
    if (first || vdot > outcome.worstOpenLoopDerivative) {
      outcome.worstOpenLoopDerivative = vdot;
      first = false;
    }
    if (!(vdot < 0.0))
      outcome.violations.push_back({"open-loop-decrease", toStd(x), vdot});
  }

  return outcome;
}

int runSynthesize(const std::string& configPath, const std::string& outDir) {
  try {
    LoadedConfig config = loadConfigFile(configPath);
    ensureDir(outDir);
    const std::string reportPath = outDir + "/system.json";

    StateSampler sampler(config.spec.n, config.verify.seed, config.verify.boxHalfWidth);
    ValidationReport validation = validate(config.spec, sampler, config.verify.samples);
    if (!validation.allPassed()) {
      nlohmann::json out{{"synthesized", false},
                         {"validation", validationToJson(validation)}};
      writeJsonFile(out, reportPath);
      std::cerr << "validation failed; report written to " << reportPath << "\n";
      return 1;
    }

    SystemDefinition system = synthesize(config.spec);
    nlohmann::json out = systemToJson(system);
    out["synthesized"] = true;
    out["validation"] = validationToJson(validation);
    writeJsonFile(out, reportPath);
    std::cout << "synthesized system written to " << reportPath << " (k = " << system.k
              << ")\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int runVerify(const std::string& configPath, const std::string& outDir,
              std::optional<std::uint64_t> seedOverride,
              std::optional<int> samplesOverride) {
  try {
    LoadedConfig config = loadConfigFile(configPath);
    if (seedOverride) config.verify.seed = *seedOverride;
    if (samplesOverride) config.verify.samples = *samplesOverride;
    ensureDir(outDir);

    StateSampler sampler(config.spec.n, config.verify.seed, config.verify.boxHalfWidth);
    ValidationReport validation = validate(config.spec, sampler, config.verify.samples);
    nlohmann::json out;
    out["validation"] = validationToJson(validation);
    out["options"] = {{"samples", config.verify.samples},
                      {"box_half_width", config.verify.boxHalfWidth},
                      {"seed", config.verify.seed},
                      {"oracle_grid", config.verify.gridDensity}};
    if (!validation.allPassed()) {
      out["passed"] = false;
      writeJsonFile(out, outDir + "/verify.json");
      std::cerr << "validation failed; see " << outDir << "/verify.json\n";
      return 1;
    }

    SystemDefinition system = synthesize(config.spec);
    VerifyOutcome outcome = verifySystem(system, config.verify);
    out["validation"] = validationToJson(outcome.validation);
    out["passed"] = outcome.passed();
    out["violations"] = violationsToJson(outcome.violations);
    out["worst_hji_residual_scaled"] = outcome.worstHjiScaled;
    out["worst_oracle_gap_scaled"] = outcome.worstOracleScaled;
    out["worst_open_loop_derivative"] = outcome.worstOpenLoopDerivative;
    out["level_c"] = outcome.levelC;
    out["level_method"] = outcome.levelMethod;
    out["level_inflation"] = outcome.levelInflation;
    out["rclf"] = analysisReportToJson(outcome.rclf);
    writeJsonFile(out, outDir + "/verify.json");

    std::printf("verify: %s\n", outcome.passed() ? "pass" : "FAIL");
    std::printf("  worst |hji residual| (scaled)   %.3e\n", outcome.worstHjiScaled);
    std::printf("  worst inf-sup oracle gap        %.3e\n", outcome.worstOracleScaled);
    std::printf("  worst inf-sup above V > %-6.4g  %.6g\n", outcome.levelC,
                outcome.rclf.worstInfSupAboveLevel);
    std::printf("  worst open-loop dV/dt           %.6g\n",
                outcome.worstOpenLoopDerivative);
    std::printf("  violations                      %zu\n", outcome.violations.size());
    return outcome.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int runSimulate(const std::string& configPath, const std::string& outDir,
                std::optional<std::uint64_t> seedOverride) {
  try {
    LoadedConfig config = loadConfigFile(configPath);
    if (!config.simulation)
      throw ConfigError("config has no 'simulation' section");
    if (seedOverride) config.simulation->seed = *seedOverride;

    StateSampler sampler(config.spec.n, config.verify.seed, config.verify.boxHalfWidth);
    ValidationReport validation = validate(config.spec, sampler, config.verify.samples);
    if (!validation.allPassed()) throw ConfigError("problem spec failed validation");
    SystemDefinition system = synthesize(config.spec);

    ensureDir(outDir);
    TrajectoryRecord record = integrate(system, *config.simulation);
    writeTrajectoryCsv(record, outDir + "/trajectory.csv");
    writeJsonFile(trajectorySummaryToJson(record), outDir + "/summary.json");

    const auto& last = record.points.back();
    std::printf("simulate: %s, t = %.6g, |x| = %.6g, V = %.6g, J = %.6g\n",
                record.completed ? "completed" : "ABORTED (non-finite state)", last.t,
                last.x.norm(), last.V, last.J);
    return record.completed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int runCostCheck(const std::string& configPath,
                 std::optional<std::uint64_t> seedOverride) {
  try {
    LoadedConfig config = loadConfigFile(configPath);
    if (!config.simulation)
      throw ConfigError("config has no 'simulation' section");
    if (config.simulation->control == ControlMode::openLoop)
      throw ConfigError("cost-check requires simulation.control_mode = 'optimal'");
    if (seedOverride) config.simulation->seed = *seedOverride;

    StateSampler sampler(config.spec.n, config.verify.seed, config.verify.boxHalfWidth);
    ValidationReport validation = validate(config.spec, sampler, config.verify.samples);
    if (!validation.allPassed()) throw ConfigError("problem spec failed validation");
    SystemDefinition system = synthesize(config.spec);

    CostIdentityResult result = costIdentityCheck(
        system, config.simulation->x0, config.simulation->T, config.simulation->dt);
    if (!result.applicable) {
      std::printf("cost-check: not applicable, trajectory left X at t = %.6g\n",
                  result.exitTime);
      return 3;
    }
    double v0 = evalScalar(system.spec.V, config.simulation->x0);
    double allowed = 1e-3 * v0;
    std::printf("cost-check: lhs = %.12g, rhs = %.12g, deviation = %.3e (allowed %.3e)\n",
                result.lhs, result.rhs, result.deviation, allowed);
    return result.deviation <= allowed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace consyn
