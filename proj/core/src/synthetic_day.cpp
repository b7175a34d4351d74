#include "mgems/synthetic_day.hpp"

#include <cmath>
#include <numbers>

#include "mgems/distribution.hpp"
#include "mgems/error.hpp"

namespace mgems {

DayPreset parse_day_preset(const std::string& name) {
  if (name == "winter") return DayPreset::kWinter;
  if (name == "spring") return DayPreset::kSpring;
  if (name == "summer") return DayPreset::kSummer;
  throw InvalidArgument("unknown day preset '" + name + "' (expected winter, spring or summer)");
}

std::string to_string(DayPreset preset) {
  switch (preset) {
    case DayPreset::kWinter: return "winter";
    case DayPreset::kSpring: return "spring";
    case DayPreset::kSummer: return "summer";
  }
  return "unknown";
}

DayConditions day_conditions(DayPreset preset, const PhysicalParams& params) {
  DayConditions d;
  const double b0 = 0.5 * (params.b_min + params.b_max);
  const double h0 = 0.5 * params.h_max;
  switch (preset) {
    case DayPreset::kWinter:
      d.mean_outdoor_c = 3.3;
      d.outdoor_swing_c = 6.0;
      d.pv_energy_kwh = 8.4;
      d.sunrise_h = 7.75;
      d.sunset_h = 18.5;
      d.x0 = {b0, h0, 15.0, 18.5};
      break;
    case DayPreset::kSpring:
      d.mean_outdoor_c = 10.1;
      d.outdoor_swing_c = 9.0;
      d.pv_energy_kwh = 14.8;
      d.sunrise_h = 7.5;
      d.sunset_h = 20.25;
      d.x0 = {b0, h0, 17.0, 19.0};
      break;
    case DayPreset::kSummer:
      d.mean_outdoor_c = 14.1;
      d.outdoor_swing_c = 10.0;
      d.pv_energy_kwh = 23.3;
      d.sunrise_h = 6.0;
      d.sunset_h = 21.75;
      d.x0 = {b0, h0, 19.5, 21.0};
      break;
  }
  return d;
}

namespace {

double half_sine(double hour, double rise, double set) {
  if (hour <= rise || hour >= set) return 0.0;
  return std::sin(std::numbers::pi * (hour - rise) / (set - rise));
}

double mid_hour(const TimeGrid& grid, int t) {
  return std::fmod(grid.hour_of_day(t) + 0.5 * grid.delta_hours, 24.0);
}

}  // namespace

std::vector<double> irradiance_profile(const DayConditions& day, const PhysicalParams& params,
                                       const TimeGrid& grid) {
  grid.validate();
  if (!(day.sunset_h > day.sunrise_h)) throw InvalidArgument("sunset must follow sunrise");
  if (!(day.pv_energy_kwh >= 0)) throw InvalidArgument("PV energy must be >= 0");
  // Normalize over a whole day so the daily energy is independent of the horizon.
  const int per_day = static_cast<int>(std::lround(24.0 / grid.delta_hours));
  double shape_sum = 0.0;
  for (int k = 0; k < per_day; ++k) {
    shape_sum += half_sine((k + 0.5) * grid.delta_hours, day.sunrise_h, day.sunset_h);
  }
  const double panel_kw_per_irr = params.panel_area_m2 * params.panel_yield;
  const double peak =
      shape_sum > 0 ? day.pv_energy_kwh / (panel_kw_per_irr * shape_sum * grid.delta_hours) : 0.0;
  std::vector<double> g(grid.horizon_steps);
  for (int t = 0; t < grid.horizon_steps; ++t) {
    g[t] = peak * half_sine(mid_hour(grid, t), day.sunrise_h, day.sunset_h);
  }
  return g;
}

WeatherTrace make_weather(const DayConditions& day, const PhysicalParams& params,
                          const TimeGrid& grid) {
  const auto g = irradiance_profile(day, params, grid);
  WeatherTrace w;
  for (int t = 0; t < grid.horizon_steps; ++t) {
    const double h = mid_hour(grid, t);
    w.theta_e.push_back(day.mean_outdoor_c + 0.5 * day.outdoor_swing_c *
                                                 std::cos(2 * std::numbers::pi *
                                                          (h - day.warmest_hour) / 24.0));
    w.phi_int.push_back(1e3 * day.window_aperture_m2 * g[t]);
    w.phi_ext.push_back(1e3 * day.wall_aperture_m2 * g[t]);
  }
  return w;
}

std::vector<double> solar_mean_profile(const DayConditions& day, const PhysicalParams& params,
                                       const TimeGrid& grid) {
  auto g = irradiance_profile(day, params, grid);
  for (double& v : g) v *= params.panel_area_m2 * params.panel_yield;
  return g;
}

DemandProfile default_demand_profile(const TimeGrid& grid) {
  grid.validate();
  auto bump = [](double h, double centre, double width) {
    const double z = (h - centre) / width;
    return std::exp(-0.5 * z * z);
  };
  DemandProfile p;
  const int T = grid.horizon_steps;
  p.el_mean.resize(T);
  p.el_sigma.assign(T, 0.35);
  p.th_base.resize(T);
  p.shower_prob.assign(T, 0.0);
  for (int t = 0; t < T; ++t) {
    const double h = mid_hour(grid, t);
    const bool awake = h >= 6.5 && h < 23.0;
    p.el_mean[t] = (awake ? 0.22 : 0.12) + 0.5 * bump(h, 7.5, 0.8) + 0.6 * bump(h, 12.5, 1.2) +
                   1.0 * bump(h, 20.0, 1.2);
    p.th_base[t] = awake ? 0.05 : 0.0;
    if (h >= 7.0 && h < 8.0) p.shower_prob[t] = 0.15;
    if (h >= 20.0 && h < 21.0) p.shower_prob[t] = 0.10;
  }
  return p;
}

ComposedScenarios compose_scenarios(const DemandProfile& demand, const SolarNoiseModel& solar,
                                    int n, std::uint64_t seed) {
  if (demand.horizon() != solar.horizon()) {
    throw InvalidArgument("demand and solar profiles have different horizons");
  }
  ComposedScenarios out;
  out.scenarios = generate_demand(demand, n, derive_seed(seed, 0));
  out.solar = sample_solar(solar, n, derive_seed(seed, 1));
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < demand.horizon(); ++t) {
      out.scenarios.values[i][t].d_el_net -= out.solar.values[i][t];
    }
  }
  return out;
}

}  // namespace mgems
