#include "mgems/solar.hpp"

#include <cmath>
#include <random>

#include "mgems/csv.hpp"
#include "mgems/distribution.hpp"
#include "mgems/error.hpp"

namespace mgems {

double SolarNoiseModel::sigma(int t) const {
  const int T = horizon();
  return sigma_0 + (sigma_T - sigma_0) * static_cast<double>(t + 1) / T;
}

void SolarNoiseModel::validate() const {
  if (mu.empty()) throw InvalidArgument("solar profile is empty");
  if (!(sigma_0 >= 0) || !(sigma_T >= 0)) throw InvalidArgument("solar sigmas must be >= 0");
  for (double m : mu) {
    if (!(m >= 0) || !std::isfinite(m)) throw InvalidArgument("solar profile must be >= 0");
  }
}

std::vector<std::vector<double>> sample_solar_raw(const SolarNoiseModel& model, int n,
                                                  std::uint64_t seed) {
  model.validate();
  if (n < 1) throw InvalidArgument("solar sample count must be >= 1");
  const int T = model.horizon();
  std::vector<std::vector<double>> out(n, std::vector<double>(T));
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < T; ++t) {
      out[i][t] = model.mu[t] * (1.0 + model.sigma(t) * normal(rng));
    }
  }
  return out;
}

SolarSamples sample_solar(const SolarNoiseModel& model, int n, std::uint64_t seed) {
  SolarSamples s;
  s.values = sample_solar_raw(model, n, seed);
  for (auto& row : s.values) {
    for (double& v : row) {
      ++s.draws;
      if (v < 0.0) {
        v = 0.0;
        ++s.clamped;
      }
    }
  }
  return s;
}

void save_solar_profile_csv(const std::vector<double>& mu, const std::string& path) {
  auto out = csv::open_for_write(path);
  out << "step,mu_kw\n";
  for (std::size_t t = 0; t < mu.size(); ++t) out << t << ',' << csv::format(mu[t]) << '\n';
}

std::vector<double> load_solar_profile_csv(const std::string& path) {
  const auto table = csv::read(path);
  csv::require_header(table, {"step", "mu_kw"}, path);
  std::vector<double> mu;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.integer(r, 0) != static_cast<long long>(r)) {
      throw IoError(path + ": steps must be 0, 1, ...");
    }
    mu.push_back(table.number(r, 1));
  }
  return mu;
}

}  // namespace mgems
