#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mgems {

/// Production during interval t is mu_t * (1 + eps_t), eps_t ~ N(0, sigma_t^2) independent
/// across t, with sigma_t rising linearly from sigma_0 to sigma_T over the horizon
/// (sigma_T reached on the last interval).
struct SolarNoiseModel {
  std::vector<double> mu;  // kW
  double sigma_0 = 0.0;
  double sigma_T = 0.0;

  int horizon() const { return static_cast<int>(mu.size()); }
  double sigma(int t) const;
  void validate() const;
};

struct SolarSamples {
  std::vector<std::vector<double>> values;  // [n][t], kW, clamped at 0
  long long clamped = 0;                    // number of negative draws set to 0
  long long draws = 0;

  double clamp_rate() const { return draws ? static_cast<double>(clamped) / draws : 0.0; }
};

SolarSamples sample_solar(const SolarNoiseModel& model, int n, std::uint64_t seed);

/// Mean production profile as CSV `step,mu_kw`.
void save_solar_profile_csv(const std::vector<double>& mu, const std::string& path);
std::vector<double> load_solar_profile_csv(const std::string& path);

/// Unclamped draws, for checking the noise law itself.
std::vector<std::vector<double>> sample_solar_raw(const SolarNoiseModel& model, int n,
                                                  std::uint64_t seed);

}  // namespace mgems
