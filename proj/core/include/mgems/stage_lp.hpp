#pragma once

#include <vector>

#include "mgems/distribution.hpp"
#include "mgems/lp.hpp"
#include "mgems/polyhedral.hpp"
#include "mgems/problem.hpp"
#include "mgems/simplex.hpp"

namespace mgems {

/// Penalty on the battery discharge variable that rules out simultaneous charge and discharge.
inline constexpr double kDischargeTieBreak = 1e-9;

struct StageSolution {
  Control control;
  double objective = 0.0;
  /// Derivative of the optimal value with respect to the state (b, h, theta_w, theta_i).
  Vec4 subgradient{};
  /// Expected stage cost part of the objective (value-to-go and tie-break excluded).
  double stage_cost = 0.0;
  /// Optimal value-to-go per atom and its probability-weighted sum.
  std::vector<double> value_to_go;
  double expected_value_to_go = 0.0;
  int lazy_rounds = 0;
  long long iterations = 0;
};

/// One-step lookahead LP at step t:
///   min  sum_i p_i [ price * delta * import_i + penalty * unserved_i + v_i ] + discomfort
/// over a control shared by all atoms, with per-atom next tank stock and value-to-go v_i
/// bounded below by every cut of the next value function (and by 0). The current state
/// enters through four fixed columns, so their reduced costs are the value's subgradient.
///
/// Cut rows are added lazily: only cuts violated at the current solution are appended and the
/// LP is re-solved by the dual simplex, so the returned optimum is that of the full LP.
class StageProblem {
 public:
  /// `next` may be null (value-to-go 0) and must outlive this object; cuts appended to it
  /// later are picked up by subsequent solves.
  StageProblem(const ProblemSpec& spec, int t, const DiscreteDistribution& dist,
               const PolyhedralFunction* next, lp::SimplexOptions options = {});

  StageSolution solve(const State& x);

  /// Replaces atoms and weights; the atom count must not change.
  void set_distribution(const DiscreteDistribution& dist);

  int step() const { return t_; }
  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_cut_rows() const { return cut_rows_; }
  const lp::Simplex& solver() const { return simplex_; }
  lp::Basis basis() const { return simplex_.basis(); }
  void set_basis(const lp::Basis& b) { simplex_.set_basis(b); }

  /// Explicit LP with every cut of the next value function for every atom, at state x.
  lp::LinearProgram full_lp(const State& x) const;

 private:
  struct Columns {
    int fb_plus, fb_minus, fw, fh;
    int z[4];
    int b_next, tw_next, ti_next, discomfort;
    std::vector<int> import, h_next, unserved, value;
  };
  struct Rows {
    std::vector<int> import, tank;
  };

  lp::LinearProgram build(const State& x, Columns& col, Rows& row) const;
  lp::Simplex make_solver(lp::SimplexOptions options);
  static std::vector<lp::Term> cut_terms(const Columns& col, int atom, const Cut& cut);

  const ProblemSpec* spec_;
  int t_;
  const PolyhedralFunction* next_;
  std::vector<Uncertainty> atoms_;
  std::vector<double> weights_;
  ThermalStepMap map_;
  Columns col_{};
  Rows row_{};
  lp::Simplex simplex_;
  // included_[i][j]: cut j of `next` already present as a row for atom i
  std::vector<std::vector<char>> included_;
  int cut_rows_ = 0;
};

/// Convenience: explicit stage LP (all cuts) at state x.
lp::LinearProgram stage_subproblem(const ProblemSpec& spec, int t, const State& x,
                                   const DiscreteDistribution& dist,
                                   const PolyhedralFunction* next);

/// Step LPs used for online decisions: fresh subproblems with laws[t] and value[t + 1], each
/// solved once along the path driven by `path` from x0. A decision copies the step-t LP and
/// solves it, so the rule depends only on (spec, laws, path, value) and not on solve history.
std::vector<StageProblem> decision_templates(const ProblemSpec& spec,
                                             const std::vector<DiscreteDistribution>& laws,
                                             const std::vector<Uncertainty>& path,
                                             const std::vector<PolyhedralFunction>& value);

/// Exact polyhedral form of the final cost kappa * ((b0 - b)^+ + (h0 - h)^+).
PolyhedralFunction final_value_function(const State& x0, double kappa);

}  // namespace mgems
