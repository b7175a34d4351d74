#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "../support/fixtures.hpp"
#include "mgems/error.hpp"
#include "mgems/horizon_lp.hpp"
#include "mgems/sddp.hpp"
#include "mgems/simplex.hpp"
#include "mgems/stage_lp.hpp"
#include "mgems/value_function_io.hpp"

namespace mgems {
namespace {

using testing::day_scenarios;
using testing::day_spec;
using testing::single_atoms;

State random_state(std::mt19937_64& rng, const ProblemSpec& spec) {
  const auto& p = spec.physical;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {p.b_min + (p.b_max - p.b_min) * u(rng), p.h_max * u(rng), 14.0 + 8.0 * u(rng),
          16.0 + 6.0 * u(rng)};
}

struct SmallStochastic {
  ProblemSpec spec = day_spec(DayPreset::kSpring, 12, 68);
  std::vector<DiscreteDistribution> dists;
  SmallStochastic() {
    const auto sc = day_scenarios(DayPreset::kSpring, spec, 200, 11);
    dists = quantize_steps(sc, 4, 5);
  }
};

TEST(FinalValue, MatchesFinalCost) {
  const auto spec = day_spec(DayPreset::kSummer);
  const auto v = final_value_function(spec.x0, 0.5);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto x = random_state(rng, spec);
    EXPECT_NEAR(v.evaluate(x.to_array()), final_cost(x, spec.x0, 0.5), 1e-12);
  }
}

TEST(StageProblem, ExpectedStageCostMatchesPlantAndGrid) {
  const auto spec = day_spec(DayPreset::kWinter, 8, 72);
  DiscreteDistribution d{{{0.8, 0.3}, {-0.4, 0.0}}, {0.3, 0.7}};
  StageProblem stage(spec, 2, d, nullptr);
  const State x{1.0, 0.5, 17.0, 18.0};
  const auto sol = stage.solve(x);
  auto expected = [&](const Control& u) {
    double c = 0.0;
    for (int i = 0; i < d.size(); ++i) {
      c += d.weights[i] * stage_cost(x, u, d.atoms[i], 2, spec.costs, spec.physical, spec.grid);
    }
    return c;
  };
  EXPECT_NEAR(sol.stage_cost, expected(sol.control), 1e-7);
  const auto box = admissible_box(x, spec.physical, spec.grid);
  double best = 1e300;
  const int n = 12;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        const Control u{box.fb_lo + (box.fb_hi - box.fb_lo) * i / n,
                        box.fw_lo + (box.fw_hi - box.fw_lo) * j / n,
                        box.fh_lo + (box.fh_hi - box.fh_lo) * k / n};
        best = std::min(best, expected(u));
      }
    }
  }
  EXPECT_LE(sol.stage_cost, best + 1e-7);
}

TEST(StageProblem, LazyCutsMatchFullProgram) {
  SmallStochastic inst;
  SddpConfig cfg;
  cfg.max_iterations = 15;
  cfg.gap_tolerance = 1e-12;
  SddpTrainer trainer(inst.spec, inst.dists, cfg);
  for (int k = 0; k < 15; ++k) trainer.iterate();
  std::mt19937_64 rng(9);
  for (int t : {0, 5, 10}) {
    StageProblem stage(inst.spec, t, inst.dists[t], &trainer.value_functions()[t + 1]);
    for (int k = 0; k < 10; ++k) {
      const auto x = random_state(rng, inst.spec);
      const auto lazy = stage.solve(x);
      const auto full = lp::solve(stage.full_lp(x));
      ASSERT_TRUE(full.optimal());
      EXPECT_NEAR(lazy.objective, full.objective, 1e-7 * std::max(1.0, std::abs(full.objective)));
    }
  }
}

TEST(StageProblem, SubgradientSupportsValue) {
  SmallStochastic inst;
  SddpConfig cfg;
  cfg.gap_tolerance = 1e-12;
  SddpTrainer trainer(inst.spec, inst.dists, cfg);
  for (int k = 0; k < 10; ++k) trainer.iterate();
  std::mt19937_64 rng(21);
  StageProblem stage(inst.spec, 4, inst.dists[4], &trainer.value_functions()[5]);
  for (int k = 0; k < 30; ++k) {
    const auto x = random_state(rng, inst.spec);
    const auto y = random_state(rng, inst.spec);
    const auto sx = stage.solve(x);
    const double vy = stage.solve(y).objective;
    double lin = sx.objective;
    const auto xa = x.to_array(), ya = y.to_array();
    for (int d = 0; d < 4; ++d) lin += sx.subgradient[d] * (ya[d] - xa[d]);
    EXPECT_LE(lin, vy + 1e-6 * std::max(1.0, std::abs(vy)));
  }
}

TEST(Sddp, DeterministicInstanceMatchesClairvoyant) {
  const auto spec = day_spec(DayPreset::kWinter, 16, 64);
  const auto path = day_scenarios(DayPreset::kWinter, spec, 1, 2).values.front();
  SddpConfig cfg;
  cfg.gap_tolerance = 1e-6;
  cfg.ub_check_period = 1;
  const auto vf = train(spec, single_atoms(path), cfg);
  const double opt = solve_clairvoyant(spec, path).objective;
  EXPECT_TRUE(vf.converged);
  EXPECT_NEAR(vf.lower_bound(spec.x0), opt, 1e-6 * std::abs(opt));
  EXPECT_NEAR(vf.log.back().upper_bound, opt, 1e-6 * std::abs(opt));
}

TEST(Sddp, LowerBoundNonDecreasingAndBelowUpperBound) {
  SmallStochastic inst;
  SddpConfig cfg;
  cfg.max_iterations = 40;
  cfg.gap_tolerance = 1e-12;
  cfg.ub_check_period = 10;
  const auto vf = train(inst.spec, inst.dists, cfg);
  ASSERT_EQ(static_cast<int>(vf.log.size()), vf.iterations);
  for (std::size_t k = 1; k < vf.log.size(); ++k) {
    EXPECT_GE(vf.log[k].lower_bound, vf.log[k - 1].lower_bound - 1e-9);
  }
  for (const auto& row : vf.log) {
    if (row.evaluated) EXPECT_LE(row.lower_bound, row.upper_bound + 1e-9);
  }
}

TEST(Sddp, TrainingIsDeterministic) {
  SmallStochastic inst;
  SddpConfig cfg;
  cfg.max_iterations = 12;
  cfg.gap_tolerance = 1e-12;
  const auto a = train(inst.spec, inst.dists, cfg);
  const auto b = train(inst.spec, inst.dists, cfg);
  std::ostringstream sa, sb;
  write_value_functions(a.value, sa);
  write_value_functions(b.value, sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Sddp, ConfigValidation) {
  SddpConfig cfg;
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.gap_tolerance = -1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(ValueFunctionIo, RoundTripEvaluatesIdentically) {
  SmallStochastic inst;
  SddpConfig cfg;
  cfg.max_iterations = 8;
  cfg.gap_tolerance = 1e-12;
  const auto vf = train(inst.spec, inst.dists, cfg);
  std::stringstream s;
  write_value_functions(vf.value, s);
  const auto back = read_value_functions(s);
  ASSERT_EQ(back.size(), vf.value.size());
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto x = random_state(rng, inst.spec).to_array();
    for (std::size_t t = 0; t < back.size(); ++t) {
      EXPECT_EQ(back[t].evaluate_or_lowest(x), vf.value[t].evaluate_or_lowest(x));
    }
  }
}

TEST(ValueFunctionIo, MalformedInputNamesTheLine) {
  std::istringstream in("mgems-value-functions v1\nsteps 1\nstep 0 1\n1 2 3\nend\n");
  try {
    read_value_functions(in);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(TrainingLog, HeaderAndEmptyUpperBoundBeforeFirstEvaluation) {
  SmallStochastic inst;
  SddpConfig cfg;
  cfg.max_iterations = 4;
  cfg.gap_tolerance = 1e-12;
  cfg.ub_check_period = 3;
  const auto vf = train(inst.spec, inst.dists, cfg);
  const std::string path = ::testing::TempDir() + "mgems_training_log.csv";
  save_training_log(vf.log, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,lb,ub,gap");
  std::getline(in, line);
  EXPECT_EQ(line.substr(line.size() - 2), ",,");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, vf.iterations);
}

}  // namespace
}  // namespace mgems
