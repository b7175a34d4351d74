#pragma once

#include <array>
#include <string>
#include <vector>

namespace mgems {

/// Decision grid of one simulated day.
struct TimeGrid {
  double delta_hours = 0.25;
  int horizon_steps = 96;
  /// Offset (in steps) of t = 0 into the day; used to place tariffs and weather.
  int start_step = 0;

  double delta_seconds() const { return delta_hours * 3600.0; }
  /// Hour of day in [0, 24) at the beginning of interval t.
  double hour_of_day(int t) const;
  void validate() const;
};

enum class ThermalScheme {
  /// Zero-order-hold exact discretization of the envelope ODE (default).
  kExact,
  /// One explicit Euler step of length delta.
  kExplicitEuler,
};

ThermalScheme parse_thermal_scheme(const std::string& name);
std::string to_string(ThermalScheme scheme);

/// Usable energy (kWh) of a water tank of `volume_l` litres over a temperature swing of `delta_k`.
double tank_capacity_kwh(double volume_l, double delta_k);

struct PhysicalParams {
  // battery
  double rho_c = 0.95;
  double rho_d = 0.95;
  double b_min = 0.0;
  double b_max = 3.0;
  double fb_max = 3.0;

  // hot water tank
  double tank_volume_l = 120.0;
  double tank_delta_k = 50.0;
  double h_max = tank_capacity_kwh(120.0, 50.0);
  double beta_h = 0.9;
  double fw_max = 3.0;

  // R6C2 envelope, SI units (K/W and J/K)
  double r_i = 4.81e-4;
  double r_s = 2.94e-4;
  double r_m = 4.51e-3;
  double r_e = 1.48e-4;
  double r_v = 4.51e-3;
  double r_f = 2.00e-2;
  double c_i = 8.30e7;
  double c_m = 5.85e6;
  double gamma = 0.5;
  double fh_max = 3.0;
  ThermalScheme thermal_scheme = ThermalScheme::kExact;

  // solar panel
  double panel_area_m2 = 20.0;
  double panel_yield = 0.15;

  void validate() const;
};

struct State {
  double b = 0.0;        // kWh
  double h = 0.0;        // kWh
  double theta_w = 0.0;  // degC
  double theta_i = 0.0;  // degC

  std::array<double, 4> to_array() const { return {b, h, theta_w, theta_i}; }
  static State from_array(const std::array<double, 4>& v) { return {v[0], v[1], v[2], v[3]}; }
  friend bool operator==(const State&, const State&) = default;
};

struct Control {
  double f_b = 0.0;  // kW, positive charges the battery
  double f_w = 0.0;  // kW
  double f_h = 0.0;  // kW
  friend bool operator==(const Control&, const Control&) = default;
};

struct Uncertainty {
  double d_el_net = 0.0;  // kW, electrical demand minus solar production
  double d_th = 0.0;      // kW, hot-water demand
  friend bool operator==(const Uncertainty&, const Uncertainty&) = default;
};

struct ExogenousInputs {
  double theta_e = 0.0;  // degC
  double phi_int = 0.0;  // W through windows
  double phi_ext = 0.0;  // W through walls
};

struct WeatherTrace {
  std::vector<double> theta_e;
  std::vector<double> phi_int;
  std::vector<double> phi_ext;

  int size() const { return static_cast<int>(theta_e.size()); }
  ExogenousInputs at(int t) const { return {theta_e.at(t), phi_int.at(t), phi_ext.at(t)}; }
  void validate(int horizon_steps) const;

  /// CSV with header `step,theta_e,phi_int,phi_ext`.
  static WeatherTrace load_csv(const std::string& path);
  void save_csv(const std::string& path) const;
};

/// Affine one-step envelope map, row 0 = wall, row 1 = indoor:
///   theta' = state * theta + heater * f_h + exo * (theta_e, phi_int, phi_ext)
struct ThermalStepMap {
  std::array<std::array<double, 2>, 2> state{};
  std::array<double, 2> heater{};  // degC per kW
  std::array<std::array<double, 3>, 2> exo{};

  static ThermalStepMap make(const PhysicalParams& params, const TimeGrid& grid);
  std::array<double, 2> offset(const ExogenousInputs& exo) const;
  std::array<double, 2> apply(double theta_w, double theta_i, double f_h,
                              const ExogenousInputs& exo) const;
};

/// Continuous-time envelope right-hand side (degC/s); exposed for integrators.
std::array<double, 2> thermal_rhs(double theta_w, double theta_i, double f_h,
                                  const ExogenousInputs& exo, const PhysicalParams& params);

double battery_step(double b, double f_b, const PhysicalParams& params, const TimeGrid& grid);
double tank_step(double h, double f_w, double d_th, const PhysicalParams& params,
                 const TimeGrid& grid);

struct Temperatures {
  double wall = 0.0;
  double indoor = 0.0;
};

Temperatures thermal_step(double theta_w, double theta_i, double f_h, const ExogenousInputs& exo,
                          const PhysicalParams& params, const TimeGrid& grid);

State dynamics(const State& x, const Control& u, const Uncertainty& w, const ExogenousInputs& exo,
               const PhysicalParams& params, const TimeGrid& grid);

}  // namespace mgems
