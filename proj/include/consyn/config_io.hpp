#ifndef CONSYN_CONFIG_IO_HPP
#define CONSYN_CONFIG_IO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "consyn/analysis.hpp"
#include "consyn/sim.hpp"
#include "consyn/system_model.hpp"

namespace consyn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  int samples = 1000;
  double boxHalfWidth = 10.0;
  std::uint64_t seed = 42;
  int gridDensity = 64;
};

struct LoadedConfig {
  ProblemSpec spec;
  std::optional<SimConfig> simulation;
  VerifyOptions verify;
};

/// Parses a problem configuration. Top-level keys: dimension,
/// disturbance_dim, control_dim, value_function, g1, g2, E, gamma, alpha1,
/// alpha2, b, plus optional `simulation` (x0, T, dt, control_mode,
/// disturbance_mode, seed, lo, hi) and `verify` (samples, box_half_width,
/// seed) objects. Matrix and vector entries are expression strings over
/// x1..xn. Unknown keys are rejected.
LoadedConfig loadConfig(const nlohmann::json& j);
LoadedConfig loadConfigFile(const std::string& path);

nlohmann::json validationToJson(const ValidationReport& report);
nlohmann::json systemToJson(const SystemDefinition& system);
nlohmann::json analysisReportToJson(const AnalysisReport& report);
nlohmann::json trajectorySummaryToJson(const TrajectoryRecord& record);

void writeJsonFile(const nlohmann::json& j, const std::string& path);

}  // namespace consyn

#endif  // CONSYN_CONFIG_IO_HPP
