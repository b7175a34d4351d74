#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgems/distribution.hpp"
#include "mgems/polyhedral.hpp"
#include "mgems/problem.hpp"
#include "mgems/stage_lp.hpp"

namespace mgems {

struct SddpConfig {
  int max_iterations = 300;
  /// Relative tolerance on the gap between the lower bound and the upper-bound estimate.
  double gap_tolerance = 1e-3;
  /// Scenarios drawn once from the stage distributions to estimate the upper bound.
  int ub_eval_scenarios = 200;
  int ub_check_period = 10;
  std::uint64_t rng_seed = 1;
  int forward_passes_per_iteration = 1;
  /// The stopping gap is the upper confidence limit  mean + z * sd / sqrt(N)  of the
  /// per-scenario Bellman gap (see SddpTrainer::upper_bound), relative to the upper bound.
  double confidence_z = 1.96;

  void validate() const;
};

struct UpperBoundEstimate {
  /// Plain Monte Carlo mean of the simulated cost and its 95% CI half-width.
  double sample_mean = 0.0;
  double sample_ci = 0.0;
  /// lower bound + mean Bellman gap: same expectation as sample_mean, lower variance.
  double mean = 0.0;
  double gap_mean = 0.0;
  double gap_sd = 0.0;
  int scenarios = 0;
};

struct TrainingLogRow {
  int iteration = 0;
  double lower_bound = 0.0;
  /// Latest upper-bound estimate (NaN before the first evaluation).
  double upper_bound = 0.0;
  UpperBoundEstimate estimate;
  double gap = 0.0;
  bool evaluated = false;
  double seconds = 0.0;
};

struct TrainedValueFunctions {
  /// value[t] approximates the cost-to-go from step t; value[T] is the final cost exactly.
  std::vector<PolyhedralFunction> value;
  std::vector<TrainingLogRow> log;
  bool converged = false;
  int iterations = 0;
  double final_gap = 0.0;
  double seconds = 0.0;

  int horizon() const { return static_cast<int>(value.size()) - 1; }
  double lower_bound(const State& x0) const { return value.front().evaluate_or_lowest(x0.to_array()); }
};

/// `iteration,lb,ub,gap`; ub and gap are empty until the first evaluation.
void save_training_log(const std::vector<TrainingLogRow>& log, const std::string& path);

struct ForwardTrajectory {
  std::vector<State> states;     // x_0..x_T
  std::vector<Control> controls;
  std::vector<double> stage_costs;
  double total_cost = 0.0;       // stage costs plus final cost
  /// sum_t [stage LP value at x_t - current approximation of the cost-to-go at x_t].
  double bellman_gap = 0.0;
};

/// Stochastic dual dynamic programming over stagewise-independent discrete distributions
/// (dists[t] is the law of the uncertainty during interval t).
class SddpTrainer {
 public:
  SddpTrainer(const ProblemSpec& spec, std::vector<DiscreteDistribution> dists, SddpConfig config);
  SddpTrainer(const SddpTrainer&) = delete;
  SddpTrainer& operator=(const SddpTrainer&) = delete;

  /// Rolls the one-step lookahead policy forward along `scenario`. Decisions use copies of the
  /// decision rule built by the last refresh_decision_rule() (the training LPs before the
  /// first refresh), so sampled paths follow what a deployed SddpPolicy would do.
  ForwardTrajectory forward(const std::vector<Uncertainty>& scenario);
  /// Adds one cut per step at every state of the trajectories, from T-1 down to 0.
  void backward(const std::vector<ForwardTrajectory>& trajectories);
  /// One iteration: forward passes on fresh samples, then the backward sweep.
  void iterate();
  /// Refreshes the decision rule, then simulates the frozen upper-bound scenarios. Along a path the simulated cost minus the
  /// lower bound telescopes into the Bellman gaps plus terms whose conditional mean is zero,
  /// so lower bound + mean Bellman gap estimates the expected cost with far less variance
  /// than the raw cost average.
  UpperBoundEstimate upper_bound();

  TrainedValueFunctions train();

  double lower_bound() const;
  /// Current approximation of the cost-to-go at step t, floored at 0 as in the stage LPs.
  double approximation(int t, const State& x) const;
  const std::vector<PolyhedralFunction>& value_functions() const { return value_; }
  std::vector<Uncertainty> sample_scenario();
  StageProblem& stage(int t) { return stages_.at(t); }
  /// Rebuilds the online decision rule (decision_templates) from the current cuts.
  void refresh_decision_rule();

 private:
  const ProblemSpec* spec_;
  std::vector<DiscreteDistribution> dists_;
  SddpConfig config_;
  std::vector<PolyhedralFunction> value_;
  std::vector<StageProblem> stages_;
  std::vector<StageProblem> decision_;
  std::vector<Uncertainty> mean_path_;
  std::vector<std::vector<Uncertainty>> ub_scenarios_;
  std::uint64_t sample_counter_ = 0;
  int iteration_ = 0;
};

TrainedValueFunctions train(const ProblemSpec& spec, const std::vector<DiscreteDistribution>& dists,
                            const SddpConfig& config);

}  // namespace mgems
