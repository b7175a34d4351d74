#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgems/policy.hpp"
#include "mgems/problem.hpp"
#include "mgems/scenarios.hpp"

namespace mgems {

struct SimulationResult {
  int scenario_id = 0;
  std::vector<State> states;  // x_0..x_T
  std::vector<Control> controls;
  std::vector<Uncertainty> uncertainties;
  std::vector<double> stage_costs;
  std::vector<double> net_imports;
  double final_cost = 0.0;
  double total_cost = 0.0;
  int unserved_events = 0;
  double unserved_kwh = 0.0;
  double decision_seconds = 0.0;
};

/// Closed-loop rollout. At step t the controller sees x_t and uncertainty[0..t-1] only.
/// Throws InfeasibleStateError naming the scenario and step when a control leaves the
/// admissible box by more than 1e-7.
SimulationResult simulate(const Policy& policy, const std::vector<Uncertainty>& scenario,
                          const ProblemSpec& spec, int scenario_id = 0);

/// 1.96 * sd / sqrt(n), sd with the n-1 denominator.
double ci_half_width(double sd, int n);

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;
  double ci = 0.0;
};
/// Single-pass (Welford) mean and standard deviation.
SampleStats sample_stats(const std::vector<double>& values);

struct PairComparison {
  std::string a, b;
  double mean_difference = 0.0;  // mean(a - b)
  double ci = 0.0;
  /// Fraction of scenarios where a is cheaper than b; ties count one half.
  double beat_fraction = 0.0;
};

struct BenchmarkReport {
  std::vector<std::string> policies;
  std::vector<std::string> variants;
  std::vector<int> scenario_ids;
  std::vector<std::vector<double>> costs;  // [policy][scenario]
  std::vector<SampleStats> stats;
  std::vector<PairComparison> pairs;       // every ordered pair a < b by index
  std::vector<double> offline_seconds;
  std::vector<double> online_ms_per_decision;
  std::vector<int> unserved_events;

  int index_of(const std::string& name) const;
  const PairComparison& pair(const std::string& a, const std::string& b) const;
};

/// Runs `body(i)` for i in [0, n) on up to `threads` workers; exceptions are rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

using TrajectorySink = std::function<void(const std::string& policy, const SimulationResult&)>;

/// Every policy on every scenario (paired design). `sink` is called on the calling thread
/// in scenario order for each policy when given.
BenchmarkReport benchmark(const std::vector<const Policy*>& policies, const ScenarioSet& scenarios,
                          const ProblemSpec& spec, int threads = 1,
                          const std::vector<double>& offline_seconds = {},
                          const TrajectorySink& sink = {});

PairComparison compare(const std::string& a, const std::vector<double>& ca, const std::string& b,
                       const std::vector<double>& cb);

struct Histogram {
  double lo = 0.0, hi = 0.0, width = 0.0;
  std::vector<long long> counts;
  double beat_fraction = 0.0;
};

/// Histogram of per-scenario cost differences a - b over `bins` equal bins spanning the data
/// (a single zero-width bin when all differences coincide).
Histogram cost_difference_histogram(const BenchmarkReport& report, const std::string& a,
                                    const std::string& b, int bins);

void save_report_csv(const BenchmarkReport& report, const std::string& path);
void save_histogram_csv(const Histogram& h, const std::string& path);
/// `scenario_id,step,b,h,theta_w,theta_i,f_b,f_w,f_h,f_ne,cost`; step T carries the final
/// state and the final cost with empty controls.
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, const SimulationResult& r);

}  // namespace mgems
