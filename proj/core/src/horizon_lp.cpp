#include "mgems/horizon_lp.hpp"

#include <algorithm>
#include <string>

#include "mgems/error.hpp"
#include "mgems/stage_lp.hpp"

namespace mgems {

HorizonLp::HorizonLp(const ProblemSpec& spec, const std::vector<Uncertainty>& forecast,
                     lp::SimplexOptions options)
    : spec_(&spec),
      T_(spec.horizon()),
      map_(ThermalStepMap::make(spec.physical, spec.grid)),
      lp_(build(forecast)),
      simplex_(lp_, options) {}

lp::LinearProgram HorizonLp::build(const std::vector<Uncertainty>& w) {
  spec_->validate();
  if (static_cast<int>(w.size()) != T_) throw InvalidArgument("forecast length != horizon");
  const auto& p = spec_->physical;
  const auto& c = spec_->costs;
  const double dt = spec_->grid.delta_hours;
  using lp::kInf;
  using lp::Sense;
  lp::LinearProgram lp("horizon");
  for (int t = 0; t <= T_; ++t) {
    const auto n = std::to_string(t);
    state_cols_.push_back({lp.add_variable(p.b_min, p.b_max, 0.0, "b_" + n),
                           lp.add_variable(0.0, kInf, 0.0, "h_" + n),
                           lp.add_variable(-kInf, kInf, 0.0, "theta_w_" + n),
                           lp.add_variable(-kInf, kInf, 0.0, "theta_i_" + n)});
  }
  for (int t = 0; t < T_; ++t) {
    const auto n = std::to_string(t);
    StepCols sc;
    sc.fb_plus = lp.add_variable(0.0, p.fb_max, 0.0, "fb_plus_" + n);
    sc.fb_minus = lp.add_variable(0.0, p.fb_max, kDischargeTieBreak, "fb_minus_" + n);
    sc.fw = lp.add_variable(0.0, p.fw_max, 0.0, "fw_" + n);
    sc.fh = lp.add_variable(0.0, p.fh_max, 0.0, "fh_" + n);
    sc.import = lp.add_variable(0.0, kInf, c.price_elec[t] * dt, "import_" + n);
    sc.unserved = lp.add_variable(0.0, kInf, c.unserved_penalty, "unserved_" + n);
    sc.discomfort = lp.add_variable(0.0, kInf, 1.0, "discomfort_" + n);
    cols_.push_back(sc);
  }
  short_b_ = lp.add_variable(0.0, kInf, c.kappa, "short_b");
  short_h_ = lp.add_variable(0.0, kInf, c.kappa, "short_h");

  for (int t = 0; t < T_; ++t) {
    const auto n = std::to_string(t);
    const auto& x = state_cols_[t];
    const auto& y = state_cols_[t + 1];
    const auto& sc = cols_[t];
    StepRows r;
    r.battery = lp.add_row({{y[0], 1.0},
                            {x[0], -1.0},
                            {sc.fb_plus, -dt * p.rho_c},
                            {sc.fb_minus, dt / p.rho_d}},
                           Sense::kEqual, 0.0, "battery_" + n);
    r.tank_cap =
        lp.add_row({{x[1], 1.0}, {sc.fw, dt * p.beta_h}}, Sense::kLessEqual, p.h_max, "cap_" + n);
    r.tank = lp.add_row({{y[1], 1.0}, {x[1], -1.0}, {sc.fw, -dt * p.beta_h}, {sc.unserved, -1.0}},
                        Sense::kEqual, -dt * w[t].d_th, "tank_" + n);
    const auto off = map_.offset(spec_->weather.at(t));
    r.wall = lp.add_row({{y[2], 1.0},
                         {x[2], -map_.state[0][0]},
                         {x[3], -map_.state[0][1]},
                         {sc.fh, -map_.heater[0]}},
                        Sense::kEqual, off[0], "wall_" + n);
    r.indoor = lp.add_row({{y[3], 1.0},
                           {x[2], -map_.state[1][0]},
                           {x[3], -map_.state[1][1]},
                           {sc.fh, -map_.heater[1]}},
                          Sense::kEqual, off[1], "indoor_" + n);
    const double pd = c.price_discomfort[t];
    r.discomfort = lp.add_row({{sc.discomfort, 1.0}, {x[3], pd}}, Sense::kGreaterEqual,
                              pd * c.temp_setpoint[t], "discomfort_" + n);
    r.import = lp.add_row({{sc.import, 1.0},
                           {sc.fb_plus, -1.0},
                           {sc.fb_minus, 1.0},
                           {sc.fw, -1.0},
                           {sc.fh, -1.0}},
                          Sense::kGreaterEqual, w[t].d_el_net, "import_" + n);
    rows_.push_back(r);
  }
  lp.add_row({{short_b_, 1.0}, {state_cols_[T_][0], 1.0}}, Sense::kGreaterEqual, spec_->x0.b,
             "final_b");
  lp.add_row({{short_h_, 1.0}, {state_cols_[T_][1], 1.0}}, Sense::kGreaterEqual, spec_->x0.h,
             "final_h");
  const auto x0 = spec_->x0.to_array();
  for (int k = 0; k < 4; ++k) lp.set_bounds(state_cols_[0][k], x0[k], x0[k]);
  return lp;
}

void HorizonLp::set_uncertainty(int t, const Uncertainty& w) {
  simplex_.set_rhs(rows_.at(t).import, w.d_el_net);
  simplex_.set_rhs(rows_.at(t).tank, -spec_->grid.delta_hours * w.d_th);
}

void HorizonLp::fix_state(int t, const State& x) {
  const auto a = x.to_array();
  for (int k = 0; k < 4; ++k) simplex_.set_bounds(state_cols_.at(t)[k], a[k], a[k]);
}

void HorizonLp::commit_step(int t, const State& x, const Control& u, const Uncertainty& w,
                            const State& next) {
  const auto& p = spec_->physical;
  const double dt = spec_->grid.delta_hours;
  const auto& sc = cols_.at(t);
  const auto& r = rows_.at(t);
  const double fbp = std::max(0.0, u.f_b);
  const double fbm = std::max(0.0, -u.f_b);
  const double unserved = std::max(0.0, -(x.h + dt * p.beta_h * u.f_w - dt * w.d_th));
  auto pin = [&](int col, double v) { simplex_.set_bounds(col, v, v); };
  pin(sc.fb_plus, fbp);
  pin(sc.fb_minus, fbm);
  pin(sc.fw, u.f_w);
  pin(sc.fh, u.f_h);
  pin(sc.unserved, unserved);
  fix_state(t, x);
  fix_state(t + 1, next);
  simplex_.set_rhs(r.import, w.d_el_net);
  simplex_.set_rhs(r.battery, next.b - x.b - dt * p.rho_c * fbp + dt / p.rho_d * fbm);
  simplex_.set_rhs(r.tank_cap, std::max(p.h_max, x.h + dt * p.beta_h * u.f_w));
  simplex_.set_rhs(r.tank, next.h - x.h - dt * p.beta_h * u.f_w - unserved);
  simplex_.set_rhs(r.wall, next.theta_w - map_.state[0][0] * x.theta_w -
                               map_.state[0][1] * x.theta_i - map_.heater[0] * u.f_h);
  simplex_.set_rhs(r.indoor, next.theta_i - map_.state[1][0] * x.theta_w -
                                 map_.state[1][1] * x.theta_i - map_.heater[1] * u.f_h);
}

HorizonSolution HorizonLp::solve() {
  const auto sol = simplex_.solve();
  if (!sol.optimal()) throw SolverError("horizon LP is " + lp::to_string(sol.status));
  HorizonSolution out;
  out.objective = sol.objective;
  for (int t = 0; t <= T_; ++t) {
    const auto& s = state_cols_[t];
    out.states.push_back({sol.x[s[0]], sol.x[s[1]], sol.x[s[2]], sol.x[s[3]]});
  }
  for (int t = 0; t < T_; ++t) {
    const auto& sc = cols_[t];
    out.controls.push_back({sol.x[sc.fb_plus] - sol.x[sc.fb_minus], sol.x[sc.fw], sol.x[sc.fh]});
  }
  return out;
}

HorizonSolution solve_clairvoyant(const ProblemSpec& spec,
                                  const std::vector<Uncertainty>& scenario) {
  HorizonLp lp(spec, scenario);
  return lp.solve();
}

}  // namespace mgems
