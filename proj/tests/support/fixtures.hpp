#pragma once

#include <cstdint>
#include <vector>

#include "mgems/distribution.hpp"
#include "mgems/problem.hpp"
#include "mgems/quantize.hpp"
#include "mgems/scenarios.hpp"
#include "mgems/solar.hpp"
#include "mgems/synthetic_day.hpp"

namespace mgems::testing {

/// Synthetic day instance; `steps` < 96 gives a shorter window starting at `start_step`.
inline ProblemSpec day_spec(DayPreset preset, int steps = 96, int start_step = 0) {
  ProblemSpec spec;
  spec.grid.horizon_steps = steps;
  spec.grid.start_step = start_step;
  const auto day = day_conditions(preset, spec.physical);
  spec.weather = make_weather(day, spec.physical, spec.grid);
  spec.costs = make_cost_params(TariffSettings{}, spec.grid, 0.5, 1.0);
  spec.x0 = day.x0;
  return spec;
}

inline ScenarioSet day_scenarios(DayPreset preset, const ProblemSpec& spec, int n,
                                 std::uint64_t seed, double sigma_T = 0.0,
                                 bool demand_noise = true) {
  const auto day = day_conditions(preset, spec.physical);
  SolarNoiseModel solar{solar_mean_profile(day, spec.physical, spec.grid), 0.0, sigma_T};
  auto demand = default_demand_profile(spec.grid);
  if (!demand_noise) demand = demand.without_noise();
  return compose_scenarios(demand, solar, n, seed).scenarios;
}

inline std::vector<DiscreteDistribution> single_atoms(const std::vector<Uncertainty>& path) {
  std::vector<DiscreteDistribution> d;
  for (const auto& w : path) d.push_back(DiscreteDistribution::single(w));
  return d;
}

}  // namespace mgems::testing
