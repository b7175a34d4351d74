#pragma once

#include <cstdint>
#include <string>

#include "mgems/physical_model.hpp"
#include "mgems/problem.hpp"
#include "mgems/scenarios.hpp"
#include "mgems/solar.hpp"

namespace mgems {

enum class DayPreset { kWinter, kSpring, kSummer };

DayPreset parse_day_preset(const std::string& name);
std::string to_string(DayPreset preset);

/// Meteorological conditions of a typical day. Irradiance follows a half-sine between
/// sunrise and sunset whose amplitude is chosen so the default panel yields pv_energy_kwh
/// over the day; outdoor temperature is a cosine peaking mid-afternoon.
struct DayConditions {
  double mean_outdoor_c = 10.0;
  double outdoor_swing_c = 8.0;  // peak-to-peak
  double warmest_hour = 15.0;
  double pv_energy_kwh = 15.0;
  double sunrise_h = 7.0;
  double sunset_h = 20.0;
  /// Effective solar apertures (m^2) converting irradiance into heat gains.
  double window_aperture_m2 = 4.0;
  double wall_aperture_m2 = 10.0;
  State x0;
};

DayConditions day_conditions(DayPreset preset, const PhysicalParams& params);

/// Global horizontal irradiance (kW/m^2) per step.
std::vector<double> irradiance_profile(const DayConditions& day, const PhysicalParams& params,
                                       const TimeGrid& grid);
WeatherTrace make_weather(const DayConditions& day, const PhysicalParams& params,
                          const TimeGrid& grid);
/// Expected PV production per step (kW) for the configured panel.
std::vector<double> solar_mean_profile(const DayConditions& day, const PhysicalParams& params,
                                       const TimeGrid& grid);

/// Household demand with an early-morning, midday and evening electrical peak and
/// morning/evening shower windows for hot water.
DemandProfile default_demand_profile(const TimeGrid& grid);

struct ComposedScenarios {
  ScenarioSet scenarios;  // d_el_net = d_el - PV
  SolarSamples solar;
};

/// Demand and solar draws use independent streams derived from `seed`, so changing the
/// solar model leaves the demand draws untouched.
ComposedScenarios compose_scenarios(const DemandProfile& demand, const SolarNoiseModel& solar,
                                    int n, std::uint64_t seed);

}  // namespace mgems
