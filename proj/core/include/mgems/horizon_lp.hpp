#pragma once

#include <vector>

#include "mgems/lp.hpp"
#include "mgems/problem.hpp"
#include "mgems/simplex.hpp"

namespace mgems {

struct HorizonSolution {
  double objective = 0.0;        // includes the cost of the fixed past
  std::vector<Control> controls;  // steps 0..T-1
  std::vector<State> states;      // steps 0..T
};

/// Deterministic full-horizon LP: every step's dynamics, admissible limits and cost terms plus
/// the final cost, driven by one uncertainty value per step. Used directly as the clairvoyant
/// benchmark and, with past steps pinned to what happened, as the receding-horizon problem.
/// All updates touch only bounds and right-hand sides, so re-solves warm start.
class HorizonLp {
 public:
  HorizonLp(const ProblemSpec& spec, const std::vector<Uncertainty>& forecast,
            lp::SimplexOptions options = {});

  int horizon() const { return T_; }
  void set_uncertainty(int t, const Uncertainty& w);
  /// Pins the state at step t (t = 0 is pinned to x0 on construction).
  void fix_state(int t, const State& x);
  /// Pins step t to what actually happened: the applied control, the realized uncertainty and
  /// the resulting state x_{t+1}; row constants absorb any mismatch with the LP model.
  void commit_step(int t, const State& x, const Control& u, const Uncertainty& w,
                   const State& next);

  HorizonSolution solve();
  const lp::LinearProgram& program() const { return lp_; }
  long long total_iterations() const { return simplex_.total_iterations(); }

 private:
  struct StepCols {
    int fb_plus, fb_minus, fw, fh, import, unserved, discomfort;
  };
  struct StepRows {
    int battery, tank_cap, tank, wall, indoor, discomfort, import;
  };

  const ProblemSpec* spec_;
  int T_;
  std::vector<std::array<int, 4>> state_cols_;  // T+1 entries
  std::vector<StepCols> cols_;
  std::vector<StepRows> rows_;
  int short_b_ = -1, short_h_ = -1;
  ThermalStepMap map_;
  lp::LinearProgram lp_;
  lp::Simplex simplex_;

  lp::LinearProgram build(const std::vector<Uncertainty>& forecast);
};

/// Optimal cost of the clairvoyant problem that knows the whole scenario in advance.
HorizonSolution solve_clairvoyant(const ProblemSpec& spec, const std::vector<Uncertainty>& scenario);

}  // namespace mgems
