#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "../support/fixtures.hpp"
#include "mgems/ar1.hpp"
#include "mgems/assessment.hpp"
#include "mgems/error.hpp"
#include "mgems/horizon_lp.hpp"
#include "mgems/mpc_policy.hpp"
#include "mgems/rule_based_policy.hpp"
#include "mgems/sddp.hpp"
#include "mgems/sddp_policy.hpp"
#include "mgems/stage_lp.hpp"

namespace mgems {
namespace {

using testing::day_scenarios;
using testing::day_spec;
using testing::single_atoms;

ProblemSpec four_step_spec() {
  auto spec = day_spec(DayPreset::kWinter, 4, 40);
  spec.costs.temp_setpoint.assign(4, -100.0);
  spec.x0.b = 1.5;
  return spec;
}

TEST(RuleBased, HandTracedRollout) {
  const auto spec = four_step_spec();
  const RuleBasedPolicy rule(spec);
  const std::vector<Uncertainty> sc{{0.5, 0.0}, {-1.0, 0.0}, {2.0, 0.0}, {-0.2, 0.0}};
  const auto r = simulate(rule, sc, spec);
  // heater stays off (set point far below), the tank holds its initial level
  for (const auto& u : r.controls) {
    EXPECT_EQ(u.f_h, 0.0);
    EXPECT_EQ(u.f_w, 0.0);
  }
  EXPECT_EQ(r.controls[0].f_b, 0.0);
  EXPECT_DOUBLE_EQ(r.controls[1].f_b, -0.5);
  EXPECT_DOUBLE_EQ(r.controls[2].f_b, 1.0);
  EXPECT_DOUBLE_EQ(r.controls[3].f_b, -2.0);
  const double b1 = 1.5;
  const double b2 = b1 - 0.25 * 0.5 / 0.95;
  const double b3 = b2 + 0.25 * 0.95 * 1.0;
  const double b4 = b3 - 0.25 * 2.0 / 0.95;
  EXPECT_NEAR(r.states[2].b, b2, 1e-12);
  EXPECT_NEAR(r.states[3].b, b3, 1e-12);
  EXPECT_NEAR(r.states[4].b, b4, 1e-12);
}

TEST(RuleBased, HeaterHysteresisAndTank) {
  auto spec = four_step_spec();
  spec.costs.temp_setpoint.assign(4, 19.0);
  const RuleBasedPolicy rule(spec, 1.0);
  bool on = false;
  State x = spec.x0;
  const auto box = admissible_box(x, spec.physical, spec.grid);
  x.theta_i = 18.5;
  EXPECT_EQ(rule.decide(1, x, 0.0, on).f_h, box.fh_hi);
  EXPECT_TRUE(on);
  x.theta_i = 19.6;
  EXPECT_EQ(rule.decide(1, x, 0.0, on).f_h, box.fh_hi);
  x.theta_i = 20.1;
  EXPECT_EQ(rule.decide(1, x, 0.0, on).f_h, 0.0);
  x.theta_i = 19.6;
  EXPECT_EQ(rule.decide(1, x, 0.0, on).f_h, 0.0);
  EXPECT_FALSE(on);

  x.h = spec.x0.h - 0.1;
  const auto u = rule.decide(1, x, -0.5, on);
  EXPECT_EQ(u.f_w, admissible_box(x, spec.physical, spec.grid).fw_hi);
  // surplus 0.5 is used up by the tank, nothing left to charge
  EXPECT_EQ(u.f_b, 0.0);
}

TEST(RuleBased, EmptyBatteryDoesNotDischarge) {
  const auto spec = four_step_spec();
  const RuleBasedPolicy rule(spec);
  bool on = false;
  State x = spec.x0;
  x.b = spec.physical.b_min;
  EXPECT_EQ(rule.decide(2, x, 1.5, on).f_b, 0.0);
}

TEST(RuleBased, IdleWhenTankFullAndHouseWarm) {
  auto spec = four_step_spec();
  spec.costs.temp_setpoint.assign(4, 19.0);
  const double margin = 1.0;
  const RuleBasedPolicy rule(spec, margin);
  bool on = true;
  State x = spec.x0;
  x.theta_i = 19.0 + 2 * margin;
  const auto u = rule.decide(1, x, 0.0, on);
  EXPECT_EQ(u.f_w, 0.0);
  EXPECT_EQ(u.f_h, 0.0);
  EXPECT_FALSE(on);
}

TEST(RuleBased, SurplusChargesUpToHeadroom) {
  const auto spec = four_step_spec();
  const RuleBasedPolicy rule(spec);
  bool on = false;
  State x = spec.x0;
  x.b = spec.physical.b_max - 0.1;
  const auto box = admissible_box(x, spec.physical, spec.grid);
  EXPECT_DOUBLE_EQ(rule.decide(1, x, -2.5, on).f_b, box.fb_hi);
  x.b = 1.0;
  EXPECT_DOUBLE_EQ(rule.decide(1, x, -0.7, on).f_b, 0.7);
}

TEST(Simulate, ZeroPriceGivesZeroCost) {
  auto spec = four_step_spec();
  std::fill(spec.costs.price_elec.begin(), spec.costs.price_elec.end(), 0.0);
  spec.costs.kappa = 0.0;
  const RuleBasedPolicy rule(spec);
  const std::vector<Uncertainty> sc{{0.5, 0.0}, {-1.0, 0.0}, {2.0, 0.0}, {-0.2, 0.0}};
  EXPECT_EQ(simulate(rule, sc, spec).total_cost, 0.0);
}

class Runaway final : public Policy {
 public:
  std::string name() const override { return "runaway"; }
  std::unique_ptr<Controller> start() const override {
    struct C : Controller {
      Control decide(const PolicyContext& ctx) override {
        return {ctx.t == 2 ? 50.0 : 0.0, 0.0, 0.0};
      }
    };
    return std::make_unique<C>();
  }
};

TEST(Simulate, RejectsControlOutsideTheBox) {
  const auto spec = four_step_spec();
  const std::vector<Uncertainty> sc(4, {0.1, 0.0});
  try {
    simulate(Runaway{}, sc, spec, 17);
    FAIL() << "expected InfeasibleStateError";
  } catch (const InfeasibleStateError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("scenario 17"), std::string::npos) << msg;
    EXPECT_NE(msg.find("step 2"), std::string::npos) << msg;
  }
  EXPECT_THROW(simulate(Runaway{}, std::vector<Uncertainty>(3), spec), InvalidArgument);
}

struct TrainedSummerWindow {
  ProblemSpec spec = day_spec(DayPreset::kSummer, 24, 56);
  ScenarioSplit split;
  std::vector<DiscreteDistribution> dists;
  TrainedValueFunctions vf;
  std::unique_ptr<SddpPolicy> sddp;
  std::unique_ptr<MpcPolicy> mpc;
  std::unique_ptr<RuleBasedPolicy> rule;

  TrainedSummerWindow() {
    split = split_scenarios(day_scenarios(DayPreset::kSummer, spec, 260, 4, 0.1), 200);
    dists = quantize_steps(split.optimization, 5, 1);
    SddpConfig cfg;
    cfg.max_iterations = 30;
    vf = train(spec, dists, cfg);
    sddp = std::make_unique<SddpPolicy>(spec, vf.value, dists);
    mpc = std::make_unique<MpcPolicy>(
        spec, std::make_shared<ArForecaster>(fit_ar1(split.optimization),
                                             split.optimization.column_means()));
    rule = std::make_unique<RuleBasedPolicy>(spec);
  }
  std::vector<const Policy*> all() const { return {sddp.get(), mpc.get(), rule.get()}; }
};

TrainedSummerWindow& window() {
  static TrainedSummerWindow w;
  return w;
}

TEST(Policies, StayInsideTheBoxAndCostsAddUp) {
  auto& w = window();
  for (const Policy* p : w.all()) {
    for (int i = 0; i < w.split.assessment.size(); ++i) {
      const auto r = simulate(*p, w.split.assessment.values[i], w.spec, i);
      const double sum = std::accumulate(r.stage_costs.begin(), r.stage_costs.end(), 0.0);
      EXPECT_NEAR(r.total_cost, sum + r.final_cost, 1e-9) << p->name();
      for (const auto& x : r.states) EXPECT_NO_THROW(check_state(x, w.spec.physical));
    }
  }
}

TEST(Policies, NonAnticipative) {
  auto& w = window();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (int k : {0, 1, 7, 23}) {
    auto a = w.split.assessment.values[0];
    auto b = a;
    for (int t = k; t < w.spec.horizon(); ++t) {
      b[t].d_el_net += noise(rng);
      b[t].d_th = std::max(0.0, b[t].d_th + noise(rng));
    }
    for (const Policy* p : w.all()) {
      const auto ra = simulate(*p, a, w.spec);
      const auto rb = simulate(*p, b, w.spec);
      for (int t = 0; t <= k; ++t) {
        EXPECT_EQ(ra.controls[t], rb.controls[t]) << p->name() << " prefix " << k << " step " << t;
      }
    }
  }
}

TEST(Policies, DecisionsAreRepeatable) {
  auto& w = window();
  for (const Policy* p : w.all()) {
    const auto& sc = w.split.assessment.values[3];
    const auto first = simulate(*p, sc, w.spec);
    simulate(*p, w.split.assessment.values[4], w.spec);
    const auto again = simulate(*p, sc, w.spec);
    EXPECT_EQ(first.controls, again.controls) << p->name();
  }
}

TEST(Policies, SddpConditionalLawIsAProbability) {
  auto& w = window();
  const auto ar = fit_ar1(w.split.optimization);
  const SddpPolicy conditional(w.spec, w.vf.value, w.dists, ar,
                               quantize_residuals(ar, w.split.optimization, 5, 2));
  const auto& sc = w.split.assessment.values[0];
  for (int t = 0; t < w.spec.horizon(); ++t) {
    const auto d = conditional.online_distribution(t, {sc.data(), static_cast<std::size_t>(t)});
    EXPECT_NEAR(std::accumulate(d.weights.begin(), d.weights.end(), 0.0), 1.0, 1e-12);
    for (const auto& a : d.atoms) EXPECT_GE(a.d_th, 0.0);
  }
  EXPECT_NO_THROW(simulate(conditional, sc, w.spec));
}

TEST(SddpPolicy, DeploysTheRuleTheTrainerEvaluates) {
  auto& w = window();
  SddpConfig cfg;
  cfg.max_iterations = 12;
  cfg.gap_tolerance = 1e-12;
  SddpTrainer trainer(w.spec, w.dists, cfg);
  for (int k = 0; k < 12; ++k) trainer.iterate();
  trainer.refresh_decision_rule();
  const SddpPolicy deployed(w.spec, trainer.value_functions(), w.dists);
  for (int i = 0; i < 5; ++i) {
    const auto s = trainer.sample_scenario();
    EXPECT_EQ(trainer.forward(s).controls, simulate(deployed, s, w.spec).controls);
  }
}

TEST(Mpc, PerfectForecastMatchesClairvoyant) {
  const auto spec = day_spec(DayPreset::kWinter, 24, 60);
  const auto sc = day_scenarios(DayPreset::kWinter, spec, 3, 6);
  for (const auto& path : sc.values) {
    const MpcPolicy mpc(spec, std::make_shared<FixedForecaster>(path));
    const double opt = solve_clairvoyant(spec, path).objective;
    EXPECT_NEAR(simulate(mpc, path, spec).total_cost, opt, 1e-6 * std::abs(opt));
  }
}

TEST(SddpPolicy, DeterministicTrainingReproducesClairvoyantCost) {
  const auto spec = day_spec(DayPreset::kSpring, 24, 60);
  const auto path = day_scenarios(DayPreset::kSpring, spec, 1, 9).values.front();
  SddpConfig cfg;
  cfg.gap_tolerance = 1e-7;
  cfg.ub_check_period = 1;
  const auto vf = train(spec, single_atoms(path), cfg);
  const SddpPolicy sddp(spec, vf.value, single_atoms(path));
  const double opt = solve_clairvoyant(spec, path).objective;
  EXPECT_NEAR(simulate(sddp, path, spec).total_cost, opt, 1e-6 * std::abs(opt));
}

// Realized cost of the last decision of a rollout versus the one-stage LP at that state.
double last_step_gap(const SimulationResult& r, const ProblemSpec& spec, const Uncertainty& w) {
  const int t = spec.horizon() - 1;
  const auto final = final_value_function(spec.x0, spec.costs.kappa);
  StageProblem one_stage(spec, t, DiscreteDistribution::single(w), &final);
  const double best = one_stage.solve(r.states[t]).objective;
  const double got = r.stage_costs[t] + r.final_cost;
  return std::abs(got - best) / std::max(1.0, std::abs(best));
}

TEST(Mpc, LastStepIsTheOneStageProgram) {
  const auto spec = day_spec(DayPreset::kWinter, 12, 80);
  const auto sc = day_scenarios(DayPreset::kWinter, spec, 4, 12);
  for (const auto& path : sc.values) {
    const MpcPolicy mpc(spec, std::make_shared<FixedForecaster>(path));
    EXPECT_LT(last_step_gap(simulate(mpc, path, spec), spec, path.back()), 1e-9);
  }
}

TEST(SddpPolicy, LastStepWithSingleAtomIsTheMyopicProgram) {
  auto& w = window();
  for (int i = 0; i < 4; ++i) {
    const auto& path = w.split.assessment.values[i];
    const SddpPolicy sddp(w.spec, w.vf.value, single_atoms(path));
    EXPECT_LT(last_step_gap(simulate(sddp, path, w.spec), w.spec, path.back()), 1e-9);
  }
}

TEST(Mpc, DeterministicPlanIsTimeConsistent) {
  const auto spec = day_spec(DayPreset::kSpring, 24, 56);
  const auto path = day_scenarios(DayPreset::kSpring, spec, 1, 21).values.front();
  HorizonLp lp(spec, path);
  const auto plan = lp.solve();
  const Plant plant(spec);
  State x = spec.x0;
  for (int t = 0; t < spec.horizon(); ++t) {
    const auto now = lp.solve();
    // the re-solved plan keeps the optimal value of the original one
    EXPECT_NEAR(now.objective, plan.objective, 1e-9 * std::max(1.0, std::abs(plan.objective)))
        << "step " << t;
    const auto next = plant.step(t, x, now.controls[t], path[t]).next;
    lp.commit_step(t, x, now.controls[t], path[t], next);
    x = next;
  }
}

TEST(SddpPolicy, RejectsMismatchedInputs) {
  const auto spec = day_spec(DayPreset::kSpring, 8, 60);
  std::vector<PolyhedralFunction> v(5);
  EXPECT_THROW(SddpPolicy(spec, v, std::vector<DiscreteDistribution>(8)), InvalidArgument);
  EXPECT_THROW(parse_online_law("adaptive"), InvalidArgument);
}

// --- statistics and reports ------------------------------------------------------------

TEST(Statistics, StreamingMatchesTwoPass) {
  std::mt19937_64 rng(12);
  std::lognormal_distribution<double> dist(3.0, 1.2);
  std::vector<double> v(5000);
  for (auto& x : v) x = 1e4 + dist(rng);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  const auto s = sample_stats(v);
  EXPECT_NEAR(s.mean, mean, 1e-9 * std::abs(mean));
  EXPECT_NEAR(s.sd, sd, 1e-9 * sd);
  EXPECT_EQ(s.ci, 1.96 * s.sd / std::sqrt(5000.0));
}

TEST(Statistics, ConfidenceHalfWidth) {
  EXPECT_NEAR(ci_half_width(1.0, 1000), 0.06198, 5e-6);
  EXPECT_EQ(ci_half_width(2.5, 49), 1.96 * 2.5 / 7.0);
  EXPECT_THROW(ci_half_width(1.0, 0), InvalidArgument);
  EXPECT_THROW(sample_stats({}), InvalidArgument);
}

BenchmarkReport synthetic_report(const std::vector<double>& a, const std::vector<double>& b) {
  BenchmarkReport r;
  r.policies = {"a", "b"};
  r.costs = {a, b};
  return r;
}

TEST(Histogram, IdenticalPoliciesGiveOneSpikeAtZero) {
  const auto r = synthetic_report({1, 2, 3, 4}, {1, 2, 3, 4});
  const auto h = cost_difference_histogram(r, "a", "b", 10);
  ASSERT_EQ(h.counts.size(), 1u);
  EXPECT_EQ(h.counts[0], 4);
  EXPECT_EQ(h.lo, 0.0);
  EXPECT_EQ(h.beat_fraction, 0.5);
}

TEST(Histogram, ShiftedCostsLandInOneBin) {
  const auto r = synthetic_report({2, 3, 4, 5, 9}, {1, 2, 3, 4, 8});
  const auto h = cost_difference_histogram(r, "a", "b", 7);
  ASSERT_EQ(h.counts.size(), 1u);
  EXPECT_EQ(h.lo, 1.0);
  EXPECT_EQ(h.counts[0], 5);
  EXPECT_EQ(h.beat_fraction, 0.0);
}

TEST(Histogram, CountsSumToScenarios) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> a(777), b(777);
  for (auto& x : a) x = n(rng);
  for (auto& x : b) x = n(rng);
  const auto r = synthetic_report(a, b);
  const auto h = cost_difference_histogram(r, "a", "b", 13);
  EXPECT_EQ(h.counts.size(), 13u);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), 0LL), 777);
  EXPECT_THROW(cost_difference_histogram(r, "a", "c", 4), InvalidArgument);
}

TEST(Benchmark, SamePolicyTwiceTies) {
  const auto spec = four_step_spec();
  const RuleBasedPolicy rule(spec);
  ScenarioSet sc;
  sc.values = {std::vector<Uncertainty>(4, {0.3, 0.1}), std::vector<Uncertainty>(4, {-0.3, 0.2}),
               std::vector<Uncertainty>(4, {1.0, 0.0})};
  sc.ids = {0, 1, 2};
  const auto rep = benchmark({&rule, &rule}, sc, spec);
  ASSERT_EQ(rep.pairs.size(), 1u);
  EXPECT_EQ(rep.pairs[0].mean_difference, 0.0);
  EXPECT_EQ(rep.pairs[0].beat_fraction, 0.5);
  ScenarioSet one = sc.slice(0, 1);
  EXPECT_THROW(benchmark({&rule}, one, spec), InvalidArgument);
}

TEST(Benchmark, ParallelMatchesSerialAndPairsAreConsistent) {
  auto& w = window();
  const auto serial = benchmark(w.all(), w.split.assessment, w.spec, 1);
  const auto par = benchmark(w.all(), w.split.assessment, w.spec, 4);
  EXPECT_EQ(serial.costs, par.costs);
  const auto& d = serial.pair("sddp", "mpc");
  const auto c = compare("sddp", serial.costs[0], "mpc", serial.costs[1]);
  EXPECT_EQ(d.mean_difference, c.mean_difference);
  EXPECT_NEAR(d.mean_difference, serial.stats[0].mean - serial.stats[1].mean, 1e-9);
  EXPECT_EQ(serial.index_of("rule_based"), 2);
}

TEST(Benchmark, SinkSeesScenarioOrder) {
  auto& w = window();
  std::vector<int> seen;
  benchmark({w.rule.get()}, w.split.assessment, w.spec, 3, {},
            [&](const std::string&, const SimulationResult& r) { seen.push_back(r.scenario_id); });
  EXPECT_EQ(seen, w.split.assessment.ids);
}

}  // namespace
}  // namespace mgems
