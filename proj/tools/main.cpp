#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "consyn/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "consyn: synthesize nonlinear benchmark systems from a chosen value "
      "function and verify their optimality and stability properties"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outDir = "./out";
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;

  auto* synth = app.add_subcommand("synthesize",
                                   "validate the problem spec and write the "
                                   "synthesized system report");
  synth->add_option("config", configPath, "problem configuration JSON")->required();
  synth->add_option("--out", outDir, "output directory (default ./out)");

  auto* verify = app.add_subcommand("verify",
                                    "check the optimality identity, the inf-sup "
                                    "oracle and the stabilizability certificate "
                                    "on sampled states");
  verify->add_option("config", configPath, "problem configuration JSON")->required();
  verify->add_option("--out", outDir, "output directory (default ./out)");
  std::uint64_t seedValue = 0;
  int samplesValue = 0;
  auto* seedOpt = verify->add_option("--seed", seedValue, "override the verify seed");
  auto* samplesOpt =
      verify->add_option("--samples", samplesValue, "override the verify sample count");

  auto* simulate = app.add_subcommand("simulate",
                                      "integrate the configured run and write the "
                                      "trajectory CSV and summary");
  simulate->add_option("config", configPath, "problem configuration JSON")->required();
  simulate->add_option("--out", outDir, "output directory (default ./out)");
  std::uint64_t simSeedValue = 0;
  auto* simSeedOpt =
      simulate->add_option("--seed", simSeedValue, "override the disturbance seed");

  auto* costCheck = app.add_subcommand("cost-check",
                                       "compare the decrease of V with the "
                                       "accumulated stage cost under optimal play");
  costCheck->add_option("config", configPath, "problem configuration JSON")->required();
  std::uint64_t costSeedValue = 0;
  auto* costSeedOpt =
      costCheck->add_option("--seed", costSeedValue, "override the disturbance seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (synth->parsed()) return consyn::runSynthesize(configPath, outDir);
  if (verify->parsed()) {
    if (*seedOpt) seed = seedValue;
    if (*samplesOpt) samples = samplesValue;
    return consyn::runVerify(configPath, outDir, seed, samples);
  }
  if (simulate->parsed()) {
    if (*simSeedOpt) seed = simSeedValue;
    return consyn::runSimulate(configPath, outDir, seed);
  }
  if (costCheck->parsed()) {
    if (*costSeedOpt) seed = costSeedValue;
    return consyn::runCostCheck(configPath, seed);
  }
  return 2;
}
