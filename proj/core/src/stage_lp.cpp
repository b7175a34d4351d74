#include "mgems/stage_lp.hpp"

#include <cmath>
#include <string>

#include "mgems/error.hpp"

namespace mgems {

namespace {

constexpr double kCutViolation = 1e-9;

}  // namespace

StageProblem::StageProblem(const ProblemSpec& spec, int t, const DiscreteDistribution& dist,
                           const PolyhedralFunction* next, lp::SimplexOptions options)
    : spec_(&spec),
      t_(t),
      next_(next),
      atoms_(dist.atoms),
      weights_(dist.weights),
      map_(ThermalStepMap::make(spec.physical, spec.grid)),
      simplex_(make_solver(options)) {}

lp::Simplex StageProblem::make_solver(lp::SimplexOptions options) {
  if (t_ < 0 || t_ >= spec_->horizon()) throw InvalidArgument("stage index out of range");
  DiscreteDistribution{atoms_, weights_}.validate();
  return lp::Simplex(build(spec_->x0, col_, row_), options);
}

lp::LinearProgram StageProblem::build(const State& x, Columns& c, Rows& r) const {
  const auto& p = spec_->physical;
  const auto& costs = spec_->costs;
  const double dt = spec_->grid.delta_hours;
  const double price = costs.price_elec.at(t_);
  const int S = num_atoms();
  using lp::kInf;
  using lp::Sense;

  lp::LinearProgram lp("stage_" + std::to_string(t_));
  c.fb_plus = lp.add_variable(0.0, p.fb_max, 0.0, "fb_plus");
  c.fb_minus = lp.add_variable(0.0, p.fb_max, kDischargeTieBreak, "fb_minus");
  c.fw = lp.add_variable(0.0, p.fw_max, 0.0, "fw");
  c.fh = lp.add_variable(0.0, p.fh_max, 0.0, "fh");
  const auto xa = x.to_array();
  const char* znames[4] = {"b", "h", "theta_w", "theta_i"};
  for (int k = 0; k < 4; ++k) c.z[k] = lp.add_variable(xa[k], xa[k], 0.0, znames[k]);
  c.b_next = lp.add_variable(p.b_min, p.b_max, 0.0, "b_next");
  c.tw_next = lp.add_variable(-kInf, kInf, 0.0, "theta_w_next");
  c.ti_next = lp.add_variable(-kInf, kInf, 0.0, "theta_i_next");
  c.discomfort = lp.add_variable(0.0, kInf, 1.0, "discomfort");
  c.import.assign(S, 0);
  c.h_next.assign(S, 0);
  c.unserved.assign(S, 0);
  c.value.assign(S, 0);
  for (int i = 0; i < S; ++i) {
    const auto n = std::to_string(i);
    c.import[i] = lp.add_variable(0.0, kInf, weights_[i] * price * dt, "import_" + n);
    c.h_next[i] = lp.add_variable(0.0, kInf, 0.0, "h_next_" + n);
    c.unserved[i] = lp.add_variable(0.0, kInf, weights_[i] * costs.unserved_penalty,
                                    "unserved_" + n);
    c.value[i] = lp.add_variable(0.0, kInf, weights_[i], "value_" + n);
  }

  lp.add_row({{c.b_next, 1.0},
              {c.z[0], -1.0},
              {c.fb_plus, -dt * p.rho_c},
              {c.fb_minus, dt / p.rho_d}},
             Sense::kEqual, 0.0, "battery");
  lp.add_row({{c.z[1], 1.0}, {c.fw, dt * p.beta_h}}, Sense::kLessEqual, p.h_max, "tank_cap");
  const auto off = map_.offset(spec_->weather.at(t_));
  lp.add_row({{c.tw_next, 1.0},
              {c.z[2], -map_.state[0][0]},
              {c.z[3], -map_.state[0][1]},
              {c.fh, -map_.heater[0]}},
             Sense::kEqual, off[0], "wall");
  lp.add_row({{c.ti_next, 1.0},
              {c.z[2], -map_.state[1][0]},
              {c.z[3], -map_.state[1][1]},
              {c.fh, -map_.heater[1]}},
             Sense::kEqual, off[1], "indoor");
  const double pd = costs.price_discomfort.at(t_);
  lp.add_row({{c.discomfort, 1.0}, {c.z[3], pd}}, Sense::kGreaterEqual,
             pd * costs.temp_setpoint.at(t_), "discomfort");
  r.import.assign(S, 0);
  r.tank.assign(S, 0);
  for (int i = 0; i < S; ++i) {
    const auto n = std::to_string(i);
    r.import[i] = lp.add_row({{c.import[i], 1.0},
                              {c.fb_plus, -1.0},
                              {c.fb_minus, 1.0},
                              {c.fw, -1.0},
                              {c.fh, -1.0}},
                             Sense::kGreaterEqual, atoms_[i].d_el_net, "import_" + n);
    r.tank[i] = lp.add_row({{c.h_next[i], 1.0},
                            {c.z[1], -1.0},
                            {c.fw, -dt * p.beta_h},
                            {c.unserved[i], -1.0}},
                           Sense::kEqual, -dt * atoms_[i].d_th, "tank_" + n);
  }
  return lp;
}

std::vector<lp::Term> StageProblem::cut_terms(const Columns& c, int atom, const Cut& cut) {
  return {{c.value[atom], 1.0},
          {c.b_next, -cut.lambda[0]},
          {c.h_next[atom], -cut.lambda[1]},
          {c.tw_next, -cut.lambda[2]},
          {c.ti_next, -cut.lambda[3]}};
}

void StageProblem::set_distribution(const DiscreteDistribution& dist) {
  dist.validate();
  if (dist.size() != num_atoms()) throw InvalidArgument("atom count cannot change");
  atoms_ = dist.atoms;
  weights_ = dist.weights;
  const double price = spec_->costs.price_elec.at(t_);
  const double dt = spec_->grid.delta_hours;
  for (int i = 0; i < num_atoms(); ++i) {
    simplex_.set_rhs(row_.import[i], atoms_[i].d_el_net);
    simplex_.set_rhs(row_.tank[i], -dt * atoms_[i].d_th);
    simplex_.set_cost(col_.import[i], weights_[i] * price * dt);
    simplex_.set_cost(col_.unserved[i], weights_[i] * spec_->costs.unserved_penalty);
    simplex_.set_cost(col_.value[i], weights_[i]);
  }
}

StageSolution StageProblem::solve(const State& x) {
  const auto xa = x.to_array();
  for (int k = 0; k < 4; ++k) {
    if (!std::isfinite(xa[k])) throw InvalidArgument("stage state must be finite");
    simplex_.set_bounds(col_.z[k], xa[k], xa[k]);
  }
  const int S = num_atoms();
  included_.resize(S);
  StageSolution out;
  lp::LpSolution sol;
  for (;;) {
    sol = simplex_.solve();
    out.iterations += sol.iterations;
    if (!sol.optimal()) {
      throw SolverError("stage " + std::to_string(t_) + " LP is " + lp::to_string(sol.status));
    }
    if (next_ == nullptr || next_->size() == 0) break;
    bool added = false;
    for (int i = 0; i < S; ++i) {
      auto& inc = included_[i];
      inc.resize(next_->size(), 0);
      const Vec4 xn{sol.x[col_.b_next], sol.x[col_.h_next[i]], sol.x[col_.tw_next],
                    sol.x[col_.ti_next]};
      const int j = next_->active_cut(xn);
      const double v = cut_value(next_->cut(j), xn);
      const double have = sol.x[col_.value[i]];
      if (v - have <= kCutViolation * std::max(1.0, std::abs(v)) || inc[j]) continue;
      simplex_.add_row(cut_terms(col_, i, next_->cut(j)), lp::Sense::kGreaterEqual,
                       next_->cut(j).beta);
      inc[j] = 1;
      ++cut_rows_;
      added = true;
    }
    if (!added) break;
    ++out.lazy_rounds;
  }

  const double fbp = sol.x[col_.fb_plus];
  const double fbm = sol.x[col_.fb_minus];
  out.control = {fbp - fbm, sol.x[col_.fw], sol.x[col_.fh]};
  out.objective = sol.objective;
  for (int k = 0; k < 4; ++k) out.subgradient[k] = sol.reduced_costs[col_.z[k]];
  out.value_to_go.resize(S);
  double vtg = 0.0;
  for (int i = 0; i < S; ++i) {
    out.value_to_go[i] = sol.x[col_.value[i]];
    vtg += weights_[i] * out.value_to_go[i];
  }
  out.expected_value_to_go = vtg;
  out.stage_cost = sol.objective - vtg - kDischargeTieBreak * fbm;
  return out;
}

lp::LinearProgram StageProblem::full_lp(const State& x) const {
  Columns c;
  Rows r;
  auto lp = build(x, c, r);
  if (next_ != nullptr) {
    for (int i = 0; i < num_atoms(); ++i) {
      for (int j = 0; j < next_->size(); ++j) {
        lp.add_row(cut_terms(c, i, next_->cut(j)), lp::Sense::kGreaterEqual, next_->cut(j).beta,
                   "cut_" + std::to_string(i) + "_" + std::to_string(j));
      }
    }
  }
  return lp;
}

lp::LinearProgram stage_subproblem(const ProblemSpec& spec, int t, const State& x,
                                   const DiscreteDistribution& dist,
                                   const PolyhedralFunction* next) {
  return StageProblem(spec, t, dist, next).full_lp(x);
}

std::vector<StageProblem> decision_templates(const ProblemSpec& spec,
                                             const std::vector<DiscreteDistribution>& laws,
                                             const std::vector<Uncertainty>& path,
                                             const std::vector<PolyhedralFunction>& value) {
  const int T = spec.horizon();
  if (static_cast<int>(laws.size()) != T || static_cast<int>(path.size()) != T ||
      static_cast<int>(value.size()) != T + 1) {
    throw InvalidArgument("decision templates need T laws, T path points and T+1 value functions");
  }
  const Plant plant(spec);
  State x = spec.x0;
  std::vector<StageProblem> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) {
    out.emplace_back(spec, t, laws[t], &value[t + 1]);
    const auto sol = out.back().solve(x);
    const auto u = admissible_box(x, spec.physical, spec.grid).project(sol.control);
    x = plant.step(t, x, u, path[t]).next;
  }
  return out;
}

PolyhedralFunction final_value_function(const State& x0, double kappa) {
  if (!(kappa >= 0)) throw InvalidArgument("kappa must be >= 0");
  PolyhedralFunction f;
  f.add_cut({0.0, 0.0, 0.0, 0.0}, 0.0);
  f.add_cut({-kappa, 0.0, 0.0, 0.0}, kappa * x0.b);
  f.add_cut({0.0, -kappa, 0.0, 0.0}, kappa * x0.h);
  f.add_cut({-kappa, -kappa, 0.0, 0.0}, kappa * (x0.b + x0.h));
  return f;
}

}  // namespace mgems
