#include <benchmark/benchmark.h>

#include <random>

#include "mgems/horizon_lp.hpp"
#include "mgems/problem.hpp"
#include "mgems/scenarios.hpp"
#include "mgems/simplex.hpp"
#include "mgems/solar.hpp"
#include "mgems/synthetic_day.hpp"

namespace {

using namespace mgems;

lp::LinearProgram dense_lp(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> a(0.1, 1.0), c(-1.0, 1.0);
  lp::LinearProgram lp;
  for (int j = 0; j < n; ++j) lp.add_variable(0.0, 10.0, c(rng));
  for (int r = 0; r < m; ++r) {
    std::vector<lp::Term> terms;
    for (int j = 0; j < n; ++j) terms.push_back({j, a(rng)});
    lp.add_row(terms, lp::Sense::kLessEqual, 5.0 + 5.0 * a(rng));
  }
  return lp;
}

void BM_SimplexDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto lp = dense_lp(n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(lp).objective);
}
BENCHMARK(BM_SimplexDense)->Arg(10)->Arg(40)->Arg(100);

struct Day {
  ProblemSpec spec;
  std::vector<Uncertainty> path;
  Day() {
    const auto d = day_conditions(DayPreset::kWinter, spec.physical);
    spec.weather = make_weather(d, spec.physical, spec.grid);
    spec.costs = make_cost_params(TariffSettings{}, spec.grid, 0.5, 1.0);
    spec.x0 = d.x0;
    const SolarNoiseModel solar{solar_mean_profile(d, spec.physical, spec.grid), 0.0, 0.1};
    path = compose_scenarios(default_demand_profile(spec.grid), solar, 1, 3).scenarios.values[0];
  }
};

void BM_ClairvoyantDay(benchmark::State& state) {
  const Day day;
  for (auto _ : state) benchmark::DoNotOptimize(solve_clairvoyant(day.spec, day.path).objective);
}
BENCHMARK(BM_ClairvoyantDay)->Unit(benchmark::kMillisecond);

void BM_HorizonWarmResolve(benchmark::State& state) {
  const Day day;
  HorizonLp lp(day.spec, day.path);
  lp.solve();
  int t = 0;
  for (auto _ : state) {
    auto w = day.path[t];
    w.d_el_net += 0.01;
    lp.set_uncertainty(t, w);
    benchmark::DoNotOptimize(lp.solve().objective);
    lp.set_uncertainty(t, day.path[t]);
    t = (t + 1) % day.spec.horizon();
  }
}
BENCHMARK(BM_HorizonWarmResolve)->Unit(benchmark::kMicrosecond);

}  // namespace
