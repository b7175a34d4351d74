#include "mgems/physical_model.hpp"

#include <cmath>
#include <fstream>

#include "mgems/csv.hpp"
#include "mgems/error.hpp"

namespace mgems {

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

constexpr double kWaterHeatCapacityKjPerKgK = 4.186;
constexpr double kWattsPerKw = 1e3;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

Mat2 continuous_matrix(const PhysicalParams& p) {
  const double g_ws = 1.0 / (p.r_i + p.r_s);
  const double g_we = 1.0 / (p.r_m + p.r_e);
  const double g_ie = 1.0 / p.r_v + 1.0 / p.r_f;
  return {{{-(g_ws + g_we) / p.c_m, g_ws / p.c_m}, {g_ws / p.c_i, -(g_ws + g_ie) / p.c_i}}};
}

// d(theta)/dt contribution per unit f_h (kW), theta_e, phi_int, phi_ext.
std::array<double, 2> heater_rates(const PhysicalParams& p) {
  return {p.gamma * kWattsPerKw / p.c_m, (1.0 - p.gamma) * kWattsPerKw / p.c_i};
}

std::array<std::array<double, 3>, 2> exo_rates(const PhysicalParams& p) {
  const double g_we = 1.0 / (p.r_m + p.r_e);
  const double g_ie = 1.0 / p.r_v + 1.0 / p.r_f;
  return {{{g_we / p.c_m, p.r_i / (p.r_i + p.r_s) / p.c_m, p.r_e / (p.r_e + p.r_m) / p.c_m},
           {g_ie / p.c_i, p.r_s / (p.r_i + p.r_s) / p.c_i, 0.0}}};
}

// exp(m) = c0 I + c1 m for a 2x2 matrix (Cayley-Hamilton).
void expm_coefficients(const Mat2& m, double& c0, double& c1) {
  const double a = 0.5 * (m[0][0] + m[1][1]);
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = a * a - det;
  const double s = std::sqrt(std::abs(disc));
  double ratio;  // sinh(s)/s or sin(s)/s
  double even;   // cosh(s) or cos(s)
  if (s < 1e-8) {
    ratio = 1.0 + disc / 6.0;
    even = 1.0 + disc / 2.0;
  } else if (disc > 0) {
    ratio = std::sinh(s) / s;
    even = std::cosh(s);
  } else {
    ratio = std::sin(s) / s;
    even = std::cos(s);
  }
  const double ea = std::exp(a);
  c1 = ea * ratio;
  c0 = ea * (even - a * ratio);
}

}  // namespace

double TimeGrid::hour_of_day(int t) const {
  double h = std::fmod((start_step + t) * delta_hours, 24.0);
  if (h < 0) h += 24.0;
  return h;
}

void TimeGrid::validate() const {
  require(delta_hours > 0 && std::isfinite(delta_hours), "time grid: delta_hours must be > 0");
  require(horizon_steps >= 1, "time grid: horizon_steps must be >= 1");
}

ThermalScheme parse_thermal_scheme(const std::string& name) {
  if (name == "exact") return ThermalScheme::kExact;
  if (name == "euler") return ThermalScheme::kExplicitEuler;
  throw InvalidArgument("unknown thermal scheme '" + name + "' (expected exact or euler)");
}

std::string to_string(ThermalScheme scheme) {
  return scheme == ThermalScheme::kExact ? "exact" : "euler";
}

double tank_capacity_kwh(double volume_l, double delta_k) {
  // 1 l of water ~ 1 kg; kJ -> kWh
  return volume_l * kWaterHeatCapacityKjPerKgK * delta_k / 3600.0;
}

void PhysicalParams::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  require(in_unit(rho_c) && in_unit(rho_d), "battery efficiencies must lie in (0, 1]");
  require(in_unit(beta_h), "beta_h must lie in (0, 1]");
  require(b_min < b_max, "b_min must be < b_max");
  require(h_max > 0, "h_max must be > 0");
  require(fb_max >= 0 && fw_max >= 0 && fh_max >= 0, "control bounds must be >= 0");
  for (double r : {r_i, r_s, r_m, r_e, r_v, r_f, c_i, c_m}) {
    require(r > 0 && std::isfinite(r), "thermal resistances and capacities must be > 0");
  }
  require(gamma >= 0 && gamma <= 1, "gamma must lie in [0, 1]");
  require(panel_area_m2 >= 0 && panel_yield >= 0, "panel area and yield must be >= 0");
}

void WeatherTrace::validate(int horizon_steps) const {
  if (static_cast<int>(theta_e.size()) != horizon_steps ||
      static_cast<int>(phi_int.size()) != horizon_steps ||
      static_cast<int>(phi_ext.size()) != horizon_steps) {
    throw InvalidArgument("weather trace length must equal horizon_steps (" +
                          std::to_string(horizon_steps) + ")");
  }
}

WeatherTrace WeatherTrace::load_csv(const std::string& path) {
  const auto table = csv::read(path);
  csv::require_header(table, {"step", "theta_e", "phi_int", "phi_ext"}, path);
  WeatherTrace w;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.integer(r, 0) != static_cast<long long>(r)) {
      throw IoError(path + ": steps must be 0, 1, 2, ... in order");
    }
    w.theta_e.push_back(table.number(r, 1));
    w.phi_int.push_back(table.number(r, 2));
    w.phi_ext.push_back(table.number(r, 3));
  }
  return w;
}

void WeatherTrace::save_csv(const std::string& path) const {
  auto out = csv::open_for_write(path);
  out << "step,theta_e,phi_int,phi_ext\n";
  for (int t = 0; t < size(); ++t) {
    out << t << ',' << csv::format(theta_e[t]) << ',' << csv::format(phi_int[t]) << ','
        << csv::format(phi_ext[t]) << '\n';
  }
}

ThermalStepMap ThermalStepMap::make(const PhysicalParams& params, const TimeGrid& grid) {
  const Mat2 a = continuous_matrix(params);
  const double dt = grid.delta_seconds();
  Mat2 phi{};
  Mat2 psi{};  // maps a constant forcing rate to the increment over one step
  if (params.thermal_scheme == ThermalScheme::kExplicitEuler) {
    phi = {{{1.0 + dt * a[0][0], dt * a[0][1]}, {dt * a[1][0], 1.0 + dt * a[1][1]}}};
    psi = {{{dt, 0.0}, {0.0, dt}}};
  } else {
    Mat2 m = {{{dt * a[0][0], dt * a[0][1]}, {dt * a[1][0], dt * a[1][1]}}};
    double c0 = 0.0, c1 = 0.0;
    expm_coefficients(m, c0, c1);
    phi = {{{c0 + c1 * m[0][0], c1 * m[0][1]}, {c1 * m[1][0], c0 + c1 * m[1][1]}}};
    // psi = A^{-1} (phi - I) = (c0 - 1) A^{-1} + c1 dt I
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const Mat2 inv = {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        psi[i][j] = (c0 - 1.0) * inv[i][j] + (i == j ? c1 * dt : 0.0);
      }
    }
  }
  ThermalStepMap map;
  map.state = phi;
  const auto hr = heater_rates(params);
  const auto er = exo_rates(params);
  for (int i = 0; i < 2; ++i) {
    map.heater[i] = psi[i][0] * hr[0] + psi[i][1] * hr[1];
    for (int k = 0; k < 3; ++k) map.exo[i][k] = psi[i][0] * er[0][k] + psi[i][1] * er[1][k];
  }
  return map;
}

std::array<double, 2> ThermalStepMap::offset(const ExogenousInputs& e) const {
  return {exo[0][0] * e.theta_e + exo[0][1] * e.phi_int + exo[0][2] * e.phi_ext,
          exo[1][0] * e.theta_e + exo[1][1] * e.phi_int + exo[1][2] * e.phi_ext};
}

std::array<double, 2> ThermalStepMap::apply(double theta_w, double theta_i, double f_h,
                                            const ExogenousInputs& e) const {
  const auto off = offset(e);
  return {state[0][0] * theta_w + state[0][1] * theta_i + heater[0] * f_h + off[0],
          state[1][0] * theta_w + state[1][1] * theta_i + heater[1] * f_h + off[1]};
}

std::array<double, 2> thermal_rhs(double theta_w, double theta_i, double f_h,
                                  const ExogenousInputs& e, const PhysicalParams& p) {
  const double ws = (theta_i - theta_w) / (p.r_i + p.r_s);
  const double dw = ws + (e.theta_e - theta_w) / (p.r_m + p.r_e) +
                    p.gamma * f_h * kWattsPerKw + p.r_i / (p.r_i + p.r_s) * e.phi_int +
                    p.r_e / (p.r_e + p.r_m) * e.phi_ext;
  const double di = -ws + (e.theta_e - theta_i) / p.r_v + (e.theta_e - theta_i) / p.r_f +
                    (1.0 - p.gamma) * f_h * kWattsPerKw + p.r_s / (p.r_i + p.r_s) * e.phi_int;
  return {dw / p.c_m, di / p.c_i};
}

double battery_step(double b, double f_b, const PhysicalParams& params, const TimeGrid& grid) {
  const double charge = std::max(f_b, 0.0);
  const double discharge = std::max(-f_b, 0.0);
  return b + grid.delta_hours * (params.rho_c * charge - discharge / params.rho_d);
}

double tank_step(double h, double f_w, double d_th, const PhysicalParams& params,
                 const TimeGrid& grid) {
  return h + grid.delta_hours * (params.beta_h * f_w - d_th);
}

Temperatures thermal_step(double theta_w, double theta_i, double f_h, const ExogenousInputs& exo,
                          const PhysicalParams& params, const TimeGrid& grid) {
  const auto next = ThermalStepMap::make(params, grid).apply(theta_w, theta_i, f_h, exo);
  return {next[0], next[1]};
}

State dynamics(const State& x, const Control& u, const Uncertainty& w, const ExogenousInputs& exo,
               const PhysicalParams& params, const TimeGrid& grid) {
  const auto temps = thermal_step(x.theta_w, x.theta_i, u.f_h, exo, params, grid);
  return {battery_step(x.b, u.f_b, params, grid), tank_step(x.h, u.f_w, w.d_th, params, grid),
          temps.wall, temps.indoor};
}

}  // namespace mgems
