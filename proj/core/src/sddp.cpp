#include "mgems/sddp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "mgems/csv.hpp"
#include "mgems/error.hpp"

namespace mgems {

void SddpConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("sddp.max_iterations must be >= 1");
  if (!(gap_tolerance > 0)) throw InvalidArgument("sddp.gap_tolerance must be > 0");
  if (ub_eval_scenarios < 1) throw InvalidArgument("sddp.ub_eval_scenarios must be >= 1");
  if (ub_check_period < 1) throw InvalidArgument("sddp.ub_check_period must be >= 1");
  if (forward_passes_per_iteration < 1) {
    throw InvalidArgument("sddp.forward_passes_per_iteration must be >= 1");
  }
  if (!(confidence_z >= 0)) throw InvalidArgument("sddp.confidence_z must be >= 0");
}

void save_training_log(const std::vector<TrainingLogRow>& log, const std::string& path) {
  auto out = csv::open_for_write(path);
  out << "iteration,lb,ub,gap\n";
  for (const auto& r : log) {
    out << r.iteration << ',' << csv::format(r.lower_bound) << ',';
    if (std::isfinite(r.upper_bound)) {
      out << csv::format(r.upper_bound) << ',' << csv::format(r.gap);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

namespace {

std::vector<Uncertainty> draw(const std::vector<DiscreteDistribution>& dists, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Uncertainty> s(dists.size());
  for (std::size_t t = 0; t < dists.size(); ++t) {
    const auto& d = dists[t];
    const double u = unif(rng);
    double acc = 0.0;
    int pick = d.size() - 1;
    for (int i = 0; i < d.size(); ++i) {
      acc += d.weights[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    s[t] = d.atoms[pick];
  }
  return s;
}

}  // namespace

SddpTrainer::SddpTrainer(const ProblemSpec& spec, std::vector<DiscreteDistribution> dists,
                         SddpConfig config)
    : spec_(&spec), dists_(std::move(dists)), config_(config) {
  spec.validate();
  config_.validate();
  const int T = spec.horizon();
  if (static_cast<int>(dists_.size()) != T) {
    throw InvalidArgument("need one distribution per step (" + std::to_string(T) + ")");
  }
  value_.resize(T + 1);
  value_[T] = final_value_function(spec.x0, spec.costs.kappa);
  stages_.reserve(T);
  for (int t = 0; t < T; ++t) stages_.emplace_back(spec, t, dists_[t], &value_[t + 1]);
  for (const auto& d : dists_) mean_path_.push_back(d.mean());

  bool deterministic = true;
  for (const auto& d : dists_) deterministic = deterministic && d.size() == 1;
  const int n_ub = deterministic ? 1 : config_.ub_eval_scenarios;
  for (int k = 0; k < n_ub; ++k) {
    ub_scenarios_.push_back(draw(dists_, derive_seed(derive_seed(config_.rng_seed, 1), k)));
  }
}

std::vector<Uncertainty> SddpTrainer::sample_scenario() {
  return draw(dists_, derive_seed(derive_seed(config_.rng_seed, 0), sample_counter_++));
}

ForwardTrajectory SddpTrainer::forward(const std::vector<Uncertainty>& scenario) {
  const int T = spec_->horizon();
  if (static_cast<int>(scenario.size()) != T) throw InvalidArgument("scenario length != horizon");
  const Plant plant(*spec_);
  ForwardTrajectory tr;
  tr.states.push_back(spec_->x0);
  for (int t = 0; t < T; ++t) {
    const State& x = tr.states.back();
    StageSolution sol;
    if (decision_.empty()) {
      sol = stages_[t].solve(x);
    } else {
      StageProblem lp = decision_[t];
      sol = lp.solve(x);
    }
    tr.bellman_gap += sol.stage_cost + sol.expected_value_to_go - approximation(t, x);
    const Control u = admissible_box(x, spec_->physical, spec_->grid).project(sol.control);
    const auto step = plant.step(t, x, u, scenario[t]);
    tr.controls.push_back(u);
    tr.stage_costs.push_back(step.cost);
    tr.total_cost += step.cost;
    tr.states.push_back(step.next);
  }
  tr.total_cost += plant.final_cost(tr.states.back());
  return tr;
}

void SddpTrainer::backward(const std::vector<ForwardTrajectory>& trajectories) {
  for (int t = spec_->horizon() - 1; t >= 0; --t) {
    for (const auto& tr : trajectories) {
      const auto& x = tr.states.at(t);
      const auto sol = stages_[t].solve(x);
      const Vec4 xa = x.to_array();
      double beta = sol.objective;
      for (int k = 0; k < 4; ++k) beta -= sol.subgradient[k] * xa[k];
      value_[t].add_cut(sol.subgradient, beta);
    }
  }
}

void SddpTrainer::iterate() {
  std::vector<ForwardTrajectory> trs;
  for (int k = 0; k < config_.forward_passes_per_iteration; ++k) {
    trs.push_back(forward(sample_scenario()));
  }
  backward(trs);
  ++iteration_;
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double c : v) sum += c;
  const double mean = sum / n;
  double ss = 0.0;
  for (double c : v) ss += (c - mean) * (c - mean);
  return {mean, v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0};
}

}  // namespace

void SddpTrainer::refresh_decision_rule() {
  decision_ = decision_templates(*spec_, dists_, mean_path_, value_);
}

UpperBoundEstimate SddpTrainer::upper_bound() {
  refresh_decision_rule();
  std::vector<double> costs, gaps;
  for (const auto& s : ub_scenarios_) {
    const auto tr = forward(s);
    costs.push_back(tr.total_cost);
    gaps.push_back(tr.bellman_gap);
  }
  UpperBoundEstimate e;
  e.scenarios = static_cast<int>(costs.size());
  const double root_n = std::sqrt(static_cast<double>(e.scenarios));
  const auto [cm, csd] = mean_sd(costs);
  e.sample_mean = cm;
  e.sample_ci = 1.96 * csd / root_n;
  const auto [gm, gsd] = mean_sd(gaps);
  e.gap_mean = gm;
  e.gap_sd = gsd;
  e.mean = lower_bound() + gm;
  return e;
}

double SddpTrainer::approximation(int t, const State& x) const {
  const double v = value_.at(t).evaluate_or_lowest(x.to_array());
  return t == spec_->horizon() ? v : std::max(0.0, v);
}

double SddpTrainer::lower_bound() const { return approximation(0, spec_->x0); }

TrainedValueFunctions SddpTrainer::train() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  TrainedValueFunctions out;
  double ub = std::numeric_limits<double>::quiet_NaN();
  double gap = ub;
  UpperBoundEstimate est;
  for (int it = 1; it <= config_.max_iterations; ++it) {
    iterate();
    TrainingLogRow row;
    row.iteration = it;
    row.lower_bound = lower_bound();
    if (it % config_.ub_check_period == 0 || it == config_.max_iterations) {
      est = upper_bound();
      ub = est.mean;
      const double upper_gap =
          est.gap_mean + config_.confidence_z * est.gap_sd / std::sqrt(double(est.scenarios));
      gap = upper_gap / std::max(std::abs(ub), 1e-12);
      row.evaluated = true;
    }
    row.upper_bound = ub;
    row.estimate = est;
    row.gap = gap;
    row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.log.push_back(row);
    out.iterations = it;
    out.final_gap = row.gap;
    if (row.evaluated && row.gap < config_.gap_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.value = value_;
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

TrainedValueFunctions train(const ProblemSpec& spec, const std::vector<DiscreteDistribution>& dists,
                            const SddpConfig& config) {
  SddpTrainer trainer(spec, dists, config);
  return trainer.train();
}

}  // namespace mgems
