#include "mgems/problem.hpp"

#include <algorithm>
#include <cmath>

#include "mgems/csv.hpp"
#include "mgems/error.hpp"

namespace mgems {

namespace {

bool in_window(double hour, double start, double end) {
  if (start <= end) return hour >= start && hour < end;
  return hour >= start || hour < end;
}

}  // namespace

void CostParams::validate(int horizon_steps) const {
  const auto n = static_cast<std::size_t>(horizon_steps);
  if (price_elec.size() != n || price_discomfort.size() != n || temp_setpoint.size() != n) {
    throw InvalidArgument("cost arrays must have horizon_steps (" + std::to_string(n) +
                          ") entries");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!(price_elec[t] >= 0) || !(price_discomfort[t] >= 0) || !std::isfinite(temp_setpoint[t])) {
      throw InvalidArgument("prices must be >= 0 (step " + std::to_string(t) + ")");
    }
  }
  if (!(kappa >= 0)) throw InvalidArgument("kappa must be >= 0");
  if (!(unserved_penalty >= 0)) throw InvalidArgument("unserved_penalty must be >= 0");
}

CostParams CostParams::load_csv(const std::string& path, double kappa, double unserved_penalty) {
  const auto table = csv::read(path);
  csv::require_header(table, {"step", "price_elec", "price_discomfort", "temp_setpoint"}, path);
  CostParams c;
  c.kappa = kappa;
  c.unserved_penalty = unserved_penalty;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.integer(r, 0) != static_cast<long long>(r)) {
      throw IoError(path + ": steps must be 0, 1, 2, ... in order");
    }
    c.price_elec.push_back(table.number(r, 1));
    c.price_discomfort.push_back(table.number(r, 2));
    c.temp_setpoint.push_back(table.number(r, 3));
  }
  return c;
}

void CostParams::save_csv(const std::string& path) const {
  auto out = csv::open_for_write(path);
  out << "step,price_elec,price_discomfort,temp_setpoint\n";
  for (std::size_t t = 0; t < price_elec.size(); ++t) {
    out << t << ',' << csv::format(price_elec[t]) << ',' << csv::format(price_discomfort[t])
        << ',' << csv::format(temp_setpoint[t]) << '\n';
  }
}

CostParams make_cost_params(const TariffSettings& tariff, const TimeGrid& grid, double kappa,
                            double unserved_penalty) {
  CostParams c;
  c.kappa = kappa;
  c.unserved_penalty = unserved_penalty;
  for (int t = 0; t < grid.horizon_steps; ++t) {
    // tariffs and setpoints apply to the middle of the interval
    const double hour = std::fmod(grid.hour_of_day(t) + 0.5 * grid.delta_hours, 24.0);
    const bool peak = in_window(hour, tariff.on_peak_start_hour, tariff.on_peak_end_hour);
    const bool day = in_window(hour, tariff.day_start_hour, tariff.day_end_hour);
    c.price_elec.push_back(peak ? tariff.on_peak_price : tariff.off_peak_price);
    c.price_discomfort.push_back(tariff.discomfort_price);
    c.temp_setpoint.push_back(day ? tariff.day_setpoint : tariff.night_setpoint);
  }
  return c;
}

void ProblemSpec::validate() const {
  grid.validate();
  physical.validate();
  costs.validate(grid.horizon_steps);
  weather.validate(grid.horizon_steps);
  check_state(x0, physical);
}

bool AdmissibleBox::contains(const Control& u, double tol) const {
  return u.f_b >= fb_lo - tol && u.f_b <= fb_hi + tol && u.f_w >= fw_lo - tol &&
         u.f_w <= fw_hi + tol && u.f_h >= fh_lo - tol && u.f_h <= fh_hi + tol;
}

Control AdmissibleBox::project(const Control& u) const {
  return {std::clamp(u.f_b, fb_lo, fb_hi), std::clamp(u.f_w, fw_lo, fw_hi),
          std::clamp(u.f_h, fh_lo, fh_hi)};
}

double net_import(const Control& u, const Uncertainty& w) {
  return u.f_b + u.f_w + u.f_h + w.d_el_net;
}

double unserved_hot_water(const State& x, const Control& u, const Uncertainty& w,
                          const PhysicalParams& params, const TimeGrid& grid) {
  return std::max(0.0, -tank_step(x.h, u.f_w, w.d_th, params, grid));
}

double stage_cost(const State& x, const Control& u, const Uncertainty& w, int t,
                  const CostParams& costs, const PhysicalParams& params, const TimeGrid& grid) {
  const double energy = costs.price_elec.at(t) * grid.delta_hours * std::max(0.0, net_import(u, w));
  const double discomfort =
      costs.price_discomfort.at(t) * std::max(0.0, costs.temp_setpoint.at(t) - x.theta_i);
  const double unserved = costs.unserved_penalty * unserved_hot_water(x, u, w, params, grid);
  return energy + discomfort + unserved;
}

double final_cost(const State& x_T, const State& x_0, double kappa) {
  return kappa * (std::max(0.0, x_0.b - x_T.b) + std::max(0.0, x_0.h - x_T.h));
}

void check_state(const State& x, const PhysicalParams& params) {
  if (!std::isfinite(x.b) || !std::isfinite(x.h) || !std::isfinite(x.theta_w) ||
      !std::isfinite(x.theta_i)) {
    throw InfeasibleStateError("state has non-finite components");
  }
  if (x.b < params.b_min - kStateTolerance || x.b > params.b_max + kStateTolerance) {
    throw InfeasibleStateError("battery stock " + std::to_string(x.b) + " outside [" +
                               std::to_string(params.b_min) + ", " + std::to_string(params.b_max) +
                               "]");
  }
  if (x.h < -kStateTolerance || x.h > params.h_max + kStateTolerance) {
    throw InfeasibleStateError("tank stock " + std::to_string(x.h) + " outside [0, " +
                               std::to_string(params.h_max) + "]");
  }
}

AdmissibleBox admissible_box(const State& x, const PhysicalParams& params, const TimeGrid& grid) {
  check_state(x, params);
  const double b = std::clamp(x.b, params.b_min, params.b_max);
  const double h = std::clamp(x.h, 0.0, params.h_max);
  const double dt = grid.delta_hours;
  AdmissibleBox box;
  box.fb_hi = std::min(params.fb_max, (params.b_max - b) / (dt * params.rho_c));
  box.fb_lo = -std::min(params.fb_max, (b - params.b_min) * params.rho_d / dt);
  box.fw_lo = 0.0;
  box.fw_hi = std::min(params.fw_max, (params.h_max - h) / (dt * params.beta_h));
  box.fh_lo = 0.0;
  box.fh_hi = params.fh_max;
  return box;
}

Plant::Plant(const ProblemSpec& spec)
    : spec_(&spec), thermal_(ThermalStepMap::make(spec.physical, spec.grid)) {}

StepOutcome Plant::step(int t, const State& x, const Control& u, const Uncertainty& w) const {
  const auto& s = *spec_;
  StepOutcome out;
  out.f_ne = net_import(u, w);
  out.cost = stage_cost(x, u, w, t, s.costs, s.physical, s.grid);
  out.unserved_kwh = unserved_hot_water(x, u, w, s.physical, s.grid);
  const auto temps = thermal_.apply(x.theta_w, x.theta_i, u.f_h, s.weather.at(t));
  out.next.b = battery_step(x.b, u.f_b, s.physical, s.grid);
  out.next.h = std::max(0.0, tank_step(x.h, u.f_w, w.d_th, s.physical, s.grid));
  out.next.theta_w = temps[0];
  out.next.theta_i = temps[1];
  return out;
}

double Plant::final_cost(const State& x_T) const {
  return mgems::final_cost(x_T, spec_->x0, spec_->costs.kappa);
}

}  // namespace mgems
