#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mgems/scenarios.hpp"
#include "mgems/solar.hpp"
#include "mgems_tools/config.hpp"

namespace mgems::tools {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNotConverged = 3,
  kExitAbort = 4,
};

/// A required artifact of an earlier stage is missing.
class MissingArtifact : public Error {
 public:
  using Error::Error;
};

struct Instance {
  ProblemSpec spec;
  DayConditions day;
  DemandProfile demand;
  SolarNoiseModel solar;
};

/// Problem and scenario generators for the configured day. Throws ConfigError when the
/// resulting instance violates an invariant (e.g. an initial state outside the bounds).
Instance build_instance(const ExperimentConfig& cfg, double sigma_0, double sigma_T,
                        bool demand_noise);
Instance build_instance(const ExperimentConfig& cfg);

/// Seeds of one generate/train/assess chain, all derived from a base seed.
struct Seeds {
  std::uint64_t base = 0;
  std::uint64_t scenarios = 0;
  std::uint64_t quantization = 0;
  std::uint64_t sddp = 0;
  std::uint64_t residuals = 0;
  static Seeds from(std::uint64_t base);
};

struct RunContext {
  ExperimentConfig cfg;
  std::string config_path;
  std::filesystem::path out_dir;
  int threads = 1;
  /// Subset of policies for `assess`; empty means the configured list.
  std::vector<std::string> policies;
};

/// `override_dir` wins over the config; a relative result is placed under $MGEMS_OUTPUT_ROOT
/// when that variable is set.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg,
                                         const std::string& override_dir);

int cmd_generate(const RunContext& ctx);
int cmd_train(const RunContext& ctx);
int cmd_assess(const RunContext& ctx);
int cmd_sweep(const RunContext& ctx);

}  // namespace mgems::tools
