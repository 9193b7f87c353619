#include "consyn/config_io.hpp"

#include <fstream>

namespace consyn {

namespace {

using nlohmann::json;

void rejectUnknownKeys(const json& obj, std::initializer_list<const char*> known,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing key '" + key + "'");
  return *it;
}

double asNumber(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int asInt(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

Expr asExpr(const json& v, int dimension, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected an expression string");
  try {
    return parseExpr(v.get<std::string>(), dimension);
  } catch (const ParseError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ExprMatrix asExprMatrix(const json& v, int rows, int cols, int dimension,
                        const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    throw ConfigError(where + ": expected an array of " + std::to_string(rows) +
                      " rows");
  ExprMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ConfigError(where + ": row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
    for (int j = 0; j < cols; ++j)
      out(i, j) = asExpr(row[static_cast<std::size_t>(j)], dimension,
                         where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return out;
}

SimConfig parseSimulation(const json& sim, int n) {
  rejectUnknownKeys(sim,
                    {"x0", "T", "dt", "control_mode", "disturbance_mode", "seed", "lo",
                     "hi"},
                    "simulation");
  SimConfig out;
  const json& x0 = require(sim, "x0", "simulation");
  if (!x0.is_array() || static_cast<int>(x0.size()) != n)
    throw ConfigError("simulation.x0: expected " + std::to_string(n) + " numbers");
  out.x0.resize(n);
  for (int i = 0; i < n; ++i)
    out.x0[i] = asNumber(x0[static_cast<std::size_t>(i)], "simulation.x0");
  out.T = asNumber(require(sim, "T", "simulation"), "simulation.T");
  out.dt = asNumber(require(sim, "dt", "simulation"), "simulation.dt");

  std::string control = require(sim, "control_mode", "simulation").get<std::string>();
  if (control == "open_loop")
    out.control = ControlMode::openLoop;
  else if (control == "optimal")
    out.control = ControlMode::optimal;
  else
    throw ConfigError("simulation.control_mode: expected 'open_loop' or 'optimal'");

  std::string dist = require(sim, "disturbance_mode", "simulation").get<std::string>();
  if (dist == "zero")
    out.disturbance = DisturbanceMode::zero;
  else if (dist == "worst_case")
    out.disturbance = DisturbanceMode::worstCase;
  else if (dist == "uniform_random")
    out.disturbance = DisturbanceMode::uniformRandom;
  else
    throw ConfigError(
        "simulation.disturbance_mode: expected 'zero', 'worst_case' or "
        "'uniform_random'");

  if (out.disturbance == DisturbanceMode::uniformRandom) {
    out.lo = asNumber(require(sim, "lo", "simulation"), "simulation.lo");
    out.hi = asNumber(require(sim, "hi", "simulation"), "simulation.hi");
    if (out.lo > out.hi) throw ConfigError("simulation: lo must be <= hi");
  } else {
    if (sim.contains("lo")) out.lo = asNumber(sim["lo"], "simulation.lo");
    if (sim.contains("hi")) out.hi = asNumber(sim["hi"], "simulation.hi");
  }
  if (sim.contains("seed")) out.seed = sim["seed"].get<std::uint64_t>();
  return out;
}

VerifyOptions parseVerify(const json& v) {
  rejectUnknownKeys(v, {"samples", "box_half_width", "seed"}, "verify");
  VerifyOptions out;
  if (v.contains("samples")) {
    out.samples = asInt(v["samples"], "verify.samples");
    if (out.samples < 1) throw ConfigError("verify.samples: must be >= 1");
  }
  if (v.contains("box_half_width")) {
    out.boxHalfWidth = asNumber(v["box_half_width"], "verify.box_half_width");
    if (!(out.boxHalfWidth > 0)) throw ConfigError("verify.box_half_width: must be > 0");
  }
  if (v.contains("seed")) out.seed = v["seed"].get<std::uint64_t>();
  return out;
}

}  // namespace

LoadedConfig loadConfig(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration root must be a JSON object");
  rejectUnknownKeys(j,
                    {"dimension", "disturbance_dim", "control_dim", "value_function",
                     "g1", "g2", "E", "gamma", "alpha1", "alpha2", "b", "simulation",
                     "verify"},
                    "config");
  LoadedConfig out;
  ProblemSpec& spec = out.spec;
  spec.n = asInt(require(j, "dimension", "config"), "dimension");
  spec.m = asInt(require(j, "disturbance_dim", "config"), "disturbance_dim");
  spec.p = asInt(require(j, "control_dim", "config"), "control_dim");
  if (spec.n < 1 || spec.m < 1 || spec.p < 1)
    throw ConfigError("dimensions must all be >= 1");

  spec.V = asExpr(require(j, "value_function", "config"), spec.n, "value_function");
  spec.g1 = asExprMatrix(require(j, "g1", "config"), spec.n, spec.m, spec.n, "g1");
  spec.g2 = asExprMatrix(require(j, "g2", "config"), spec.n, spec.p, spec.n, "g2");
  spec.E = asExprMatrix(require(j, "E", "config"), spec.n, spec.n, spec.n, "E");

  const json& gamma = require(j, "gamma", "config");
  if (!gamma.is_array() || static_cast<int>(gamma.size()) != spec.n)
    throw ConfigError("gamma: expected " + std::to_string(spec.n) + " entries");
  spec.gamma.resize(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i)
    spec.gamma[static_cast<std::size_t>(i)] =
        asExpr(gamma[static_cast<std::size_t>(i)], spec.n,
               "gamma[" + std::to_string(i) + "]");

  spec.alpha1 = asNumber(require(j, "alpha1", "config"), "alpha1");
  spec.alpha2 = asNumber(require(j, "alpha2", "config"), "alpha2");
  spec.b = asNumber(require(j, "b", "config"), "b");

  if (j.contains("simulation")) out.simulation = parseSimulation(j["simulation"], spec.n);
  if (j.contains("verify")) out.verify = parseVerify(j["verify"]);
  return out;
}

LoadedConfig loadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return loadConfig(j);
}

nlohmann::json validationToJson(const ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json entry{{"name", c.name}, {"passed", c.passed}, {"worst", c.worst}};
    entry["witness"] = std::vector<double>(c.witness.data(),
                                           c.witness.data() + c.witness.size());
    checks.push_back(std::move(entry));
  }
  return nlohmann::json{{"passed", report.allPassed()}, {"checks", std::move(checks)}};
}

nlohmann::json systemToJson(const SystemDefinition& system) {
  nlohmann::json out;
  out["k"] = system.k;
  out["cross_check_deviation"] = system.crossCheckDeviation;
  auto vecStrings = [](const ExprVector& v) {
    std::vector<std::string> s;
    s.reserve(v.size());
    for (const auto& e : v) s.push_back(e.str());
    return s;
  };
  out["f"] = vecStrings(system.f);
  out["h"] = vecStrings(system.h);
  out["Vx"] = vecStrings(system.Vx);
  out["q"] = system.q.str();
  nlohmann::json p = nlohmann::json::array();
  for (int i = 0; i < system.P.rows; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < system.P.cols; ++j) row.push_back(system.P(i, j).str());
    p.push_back(row);
  }
  out["P"] = std::move(p);
  out["notes"] = {"the normalized gradient term applies the single scalar "
                  "coefficient k to every state component"};
  return out;
}

nlohmann::json analysisReportToJson(const AnalysisReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"x", std::vector<double>(s.x.data(), s.x.data() + s.x.size())},
                       {"hji_residual", s.hji},
                       {"inf_sup", s.infSup},
                       {"in_X", s.inX},
                       {"V", s.V},
                       {"grad_norm", s.gradNorm}});
  }
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"check", v.check},
                          {"x", std::vector<double>(v.x.data(), v.x.data() + v.x.size())},
                          {"value", v.value}});
  }
  return nlohmann::json{{"certified", report.certified()},
                        {"checked_above_level", report.checkedAboveLevel},
                        {"worst_inf_sup_above_level", report.worstInfSupAboveLevel},
                        {"worst_abs_hji", report.worstAbsHji},
                        {"violations", std::move(violations)},
                        {"samples", std::move(samples)}};
}

nlohmann::json trajectorySummaryToJson(const TrajectoryRecord& record) {
  nlohmann::json out;
  out["completed"] = record.completed;
  if (!record.completed) out["abort_time"] = record.abortTime;
  if (!record.points.empty()) {
    const auto& last = record.points.back();
    out["terminal_time"] = last.t;
    out["terminal_state"] =
        std::vector<double>(last.x.data(), last.x.data() + last.x.size());
    out["terminal_state_norm"] = last.x.norm();
    out["terminal_V"] = last.V;
    out["total_cost"] = last.J;
    std::vector<double> exits;
    for (std::size_t i = 1; i < record.points.size(); ++i)
      if (record.points[i - 1].inX && !record.points[i].inX)
        exits.push_back(record.points[i].t);
    out["x_exit_times"] = exits;
  }
  return out;
}

void writeJsonFile(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

}  // namespace consyn
