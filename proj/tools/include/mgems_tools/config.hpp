#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgems/error.hpp"
#include "mgems/physical_model.hpp"
#include "mgems/problem.hpp"
#include "mgems/sddp.hpp"
#include "mgems/sddp_policy.hpp"
#include "mgems/synthetic_day.hpp"

namespace mgems::tools {

/// The configuration file is unreadable, malformed, has unknown keys or invalid values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ScenarioSettings {
  int n_optimization = 1000;
  int n_assessment = 1000;
  bool demand_noise = true;
  double solar_sigma_0 = 0.0;
  double solar_sigma_T = 0.0;
  int atoms = 10;
};

struct DemandSettings {
  double el_sigma = 0.35;
  double el_correlation = 0.7;
  double th_sigma = 0.3;
  double shower_kw = 6.0;
};

/// Optional overrides of the preset's meteorological conditions.
struct DayOverrides {
  std::optional<double> mean_outdoor_c, outdoor_swing_c, pv_energy_kwh;
  std::optional<double> window_aperture_m2, wall_aperture_m2;
  std::optional<double> theta_w0, theta_i0, b0, h0;
};

struct AssessSettings {
  std::vector<std::string> policies{"sddp", "mpc", "rule_based"};
  int histogram_bins = 50;
  std::string histogram_a = "sddp";
  std::string histogram_b = "mpc";
  bool trajectories = true;
};

struct SweepSettings {
  std::vector<double> sigma_T{0.0, 0.05, 0.1, 0.2};
  double sigma_0 = 0.0;
  int n_assessment = 10000;
  bool demand_noise = false;
  std::vector<std::string> policies{"sddp", "mpc"};
};

struct ExperimentConfig {
  std::string text;  // file content as read, hashed into the manifest
  std::uint64_t seed = 1;
  std::string output_dir = "results/run";
  DayPreset day = DayPreset::kSummer;
  DayOverrides day_overrides;
  TimeGrid grid;
  PhysicalParams physical;
  TariffSettings tariff;
  double kappa = 0.5;
  double unserved_penalty = 1.0;
  DemandSettings demand;
  ScenarioSettings scenarios;
  SddpConfig sddp;
  OnlineLaw online_law = OnlineLaw::kOffline;
  int residual_atoms = 10;
  double rule_margin = 1.0;
  AssessSettings assess;
  SweepSettings sweep;
};

/// Parses TOML text; `origin` names the source in messages. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "config");
/// Reads a .toml file, or the embedded configuration of a run manifest (.json).
ExperimentConfig load_config(const std::string& path);

inline const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names{"sddp", "mpc", "rule_based"};
  return names;
}

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace mgems::tools
