#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgems/physical_model.hpp"

namespace mgems {

/// values[n][t] is the uncertainty realized during interval t, i.e. the noise that drives the
/// transition from x_t to x_{t+1}. A policy deciding at t has seen values[n][0..t-1].
struct ScenarioSet {
  std::vector<int> ids;
  std::vector<std::vector<Uncertainty>> values;

  int size() const { return static_cast<int>(values.size()); }
  int horizon() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  /// Throws InvalidArgument on ragged rows, negative hot-water demand or non-finite values.
  void validate(int horizon_steps) const;
  /// Per-step mean over scenarios.
  std::vector<Uncertainty> column_means() const;
  ScenarioSet slice(int first, int count) const;

  /// CSV with header `scenario_id,step,d_el_net,d_th`.
  void save_csv(const std::string& path) const;
  static ScenarioSet load_csv(const std::string& path);
};

struct ScenarioSplit {
  ScenarioSet optimization;
  ScenarioSet assessment;
};

/// The first `n_opt` scenarios build the policies; the remaining ones assess them.
ScenarioSplit split_scenarios(const ScenarioSet& all, int n_opt);

/// Shape of the synthetic household demand.
///   d_el_t = el_mean_t * exp(el_sigma_t * Z_t - el_sigma_t^2 / 2),
///     Z a stationary unit-variance AR(1) chain with coefficient el_correlation;
///   d_th_t = th_base_t * exp(th_sigma * Y_t - th_sigma^2 / 2) + shower_kw * B_t,
///     Y iid standard normal, B_t ~ Bernoulli(shower_prob_t).
/// Hence E[d_el_t] = el_mean_t and E[d_th_t] = th_base_t + shower_kw * shower_prob_t.
struct DemandProfile {
  std::vector<double> el_mean;
  std::vector<double> el_sigma;
  double el_correlation = 0.7;
  std::vector<double> th_base;
  double th_sigma = 0.3;
  std::vector<double> shower_prob;
  double shower_kw = 6.0;

  int horizon() const { return static_cast<int>(el_mean.size()); }
  void validate() const;
  std::vector<double> el_expectation() const { return el_mean; }
  std::vector<double> th_expectation() const;
  /// Same profile with every noise source switched off (demand equals its mean).
  DemandProfile without_noise() const;
};

/// Electrical demand (before solar) and hot-water demand; scenario i uses its own seeded stream.
ScenarioSet generate_demand(const DemandProfile& profile, int n, std::uint64_t seed);

}  // namespace mgems
