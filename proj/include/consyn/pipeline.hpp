#ifndef CONSYN_PIPELINE_HPP
#define CONSYN_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "consyn/config_io.hpp"

namespace consyn {

/// One violated invariant found while verifying a synthesized system.
struct VerifyViolation {
  std::string check;
  std::vector<double> witness;
  double value = 0;
};

/// Library form of the `verify` subcommand: HJI residual, closed-form vs
/// grid-oracle inf-sup agreement, RCLF certification above the estimated
/// level, and open-loop Lyapunov decrease, all on seeded samples.
struct VerifyOutcome {
  ValidationReport validation;
  std::vector<VerifyViolation> violations;
  AnalysisReport rclf;
  double worstHjiScaled = 0;     // max |residual| / (1 + q)
  double worstOracleScaled = 0;  // max |closed form - oracle| / (1 + |closed form|)
  double worstOpenLoopDerivative = 0;  // max Vx'f over nonzero samples
  double levelC = 0;
  double levelInflation = 1.0;
  std::string levelMethod;
  int samples = 0;
  bool passed() const { return validation.allPassed() && violations.empty(); }
};

VerifyOutcome verifySystem(const SystemDefinition& system, const VerifyOptions& options);

/// Subcommand drivers. Each returns the process exit code and writes its
/// reports under `outDir` (created if needed).
int runSynthesize(const std::string& configPath, const std::string& outDir);
int runVerify(const std::string& configPath, const std::string& outDir,
              std::optional<std::uint64_t> seedOverride,
              std::optional<int> samplesOverride);
int runSimulate(const std::string& configPath, const std::string& outDir,
                std::optional<std::uint64_t> seedOverride);
int runCostCheck(const std::string& configPath,
                 std::optional<std::uint64_t> seedOverride);

}  // namespace consyn

#endif  // CONSYN_PIPELINE_HPP
