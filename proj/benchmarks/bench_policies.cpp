#include <benchmark/benchmark.h>

#include <memory>

#include "mgems/ar1.hpp"
#include "mgems/assessment.hpp"
#include "mgems/mpc_policy.hpp"
#include "mgems/quantize.hpp"
#include "mgems/rule_based_policy.hpp"
#include "mgems/sddp.hpp"
#include "mgems/sddp_policy.hpp"
#include "mgems/synthetic_day.hpp"

namespace {

using namespace mgems;

// Summer day, 200 optimization scenarios quantized to 5 atoms, 20 training iterations.
struct Trained {
  ProblemSpec spec;
  ScenarioSplit split;
  std::vector<DiscreteDistribution> laws;
  TrainedValueFunctions vf;

  Trained() {
    const auto d = day_conditions(DayPreset::kSummer, spec.physical);
    spec.weather = make_weather(d, spec.physical, spec.grid);
    spec.costs = make_cost_params(TariffSettings{}, spec.grid, 0.5, 1.0);
    spec.x0 = d.x0;
    const SolarNoiseModel solar{solar_mean_profile(d, spec.physical, spec.grid), 0.0, 0.1};
    split = split_scenarios(
        compose_scenarios(default_demand_profile(spec.grid), solar, 210, 5).scenarios, 200);
    laws = quantize_steps(split.optimization, 5, 1);
    SddpConfig cfg;
    cfg.max_iterations = 20;
    cfg.gap_tolerance = 1e-12;
    cfg.ub_check_period = 100;
    vf = train(spec, laws, cfg);
  }
};

const Trained& trained() {
  static const Trained t;
  return t;
}

void BM_SddpIteration(benchmark::State& state) {
  const auto& t = trained();
  SddpConfig cfg;
  SddpTrainer trainer(t.spec, t.laws, cfg);
  for (auto _ : state) trainer.iterate();
}
BENCHMARK(BM_SddpIteration)->Unit(benchmark::kMillisecond)->Iterations(20);

void rollout(benchmark::State& state, const Policy& policy) {
  const auto& t = trained();
  int i = 0;
  for (auto _ : state) {
    const auto& path = t.split.assessment.values[i];
    benchmark::DoNotOptimize(simulate(policy, path, t.spec).total_cost);
    i = (i + 1) % t.split.assessment.size();
  }
  state.counters["decisions"] = benchmark::Counter(
      static_cast<double>(state.iterations() * t.spec.horizon()), benchmark::Counter::kIsRate);
}

void BM_RolloutSddp(benchmark::State& state) {
  const auto& t = trained();
  const SddpPolicy policy(t.spec, t.vf.value, t.laws);
  rollout(state, policy);
}
BENCHMARK(BM_RolloutSddp)->Unit(benchmark::kMillisecond);

void BM_RolloutMpc(benchmark::State& state) {
  const auto& t = trained();
  const MpcPolicy policy(t.spec, std::make_shared<ArForecaster>(fit_ar1(t.split.optimization),
                                                                t.split.optimization.column_means()));
  rollout(state, policy);
}
BENCHMARK(BM_RolloutMpc)->Unit(benchmark::kMillisecond);

void BM_RolloutRuleBased(benchmark::State& state) {
  const auto& t = trained();
  const RuleBasedPolicy policy(t.spec);
  rollout(state, policy);
}
BENCHMARK(BM_RolloutRuleBased)->Unit(benchmark::kMicrosecond);

}  // namespace
