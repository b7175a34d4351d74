#include "mgems/assessment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "mgems/csv.hpp"
#include "mgems/error.hpp"

namespace mgems {

namespace {

constexpr double kBoxTolerance = 1e-7;

}  // namespace

SimulationResult simulate(const Policy& policy, const std::vector<Uncertainty>& scenario,
                          const ProblemSpec& spec, int scenario_id) {
  const int T = spec.horizon();
  if (static_cast<int>(scenario.size()) != T) {
    throw InvalidArgument("scenario " + std::to_string(scenario_id) + " has " +
                          std::to_string(scenario.size()) + " steps, expected " +
                          std::to_string(T));
  }
  using Clock = std::chrono::steady_clock;
  const Plant plant(spec);
  auto controller = policy.start();
  SimulationResult r;
  r.scenario_id = scenario_id;
  r.states.reserve(T + 1);
  r.states.push_back(spec.x0);
  double seconds = 0.0;
  for (int t = 0; t < T; ++t) {
    const State x = r.states.back();
    const PolicyContext ctx{t, x, std::span<const Uncertainty>(scenario.data(), t)};
    const auto start = Clock::now();
    const Control u = controller->decide(ctx);
    seconds += std::chrono::duration<double>(Clock::now() - start).count();
    const auto box = admissible_box(x, spec.physical, spec.grid);
    if (!box.contains(u, kBoxTolerance)) {
      throw InfeasibleStateError(policy.name() + " left the admissible box on scenario " +
                                 std::to_string(scenario_id) + " at step " + std::to_string(t) +
                                 " (f_b=" + std::to_string(u.f_b) + ", f_w=" +
                                 std::to_string(u.f_w) + ", f_h=" + std::to_string(u.f_h) + ")");
    }
    const auto out = plant.step(t, x, u, scenario[t]);
    r.controls.push_back(u);
    r.uncertainties.push_back(scenario[t]);
    r.stage_costs.push_back(out.cost);
    r.net_imports.push_back(out.f_ne);
    r.total_cost += out.cost;
    if (out.unserved_kwh > 0) {
      ++r.unserved_events;
      r.unserved_kwh += out.unserved_kwh;
    }
    r.states.push_back(out.next);
  }
  r.final_cost = plant.final_cost(r.states.back());
  r.total_cost += r.final_cost;
  r.decision_seconds = seconds;
  return r;
}

double ci_half_width(double sd, int n) {
  if (n < 1) throw InvalidArgument("confidence interval needs n >= 1");
  return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

SampleStats sample_stats(const std::vector<double>& v) {
  if (v.empty()) throw InvalidArgument("statistics of an empty sample");
  double mean = 0.0, m2 = 0.0;
  long long k = 0;
  for (double x : v) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  SampleStats s;
  s.mean = mean;
  s.sd = k > 1 ? std::sqrt(m2 / static_cast<double>(k - 1)) : 0.0;
  s.ci = ci_half_width(s.sd, static_cast<int>(k));
  return s;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

PairComparison compare(const std::string& a, const std::vector<double>& ca, const std::string& b,
                       const std::vector<double>& cb) {
  if (ca.size() != cb.size() || ca.empty()) {
    throw InvalidArgument("paired comparison needs equal, non-empty samples");
  }
  std::vector<double> diff(ca.size());
  double wins = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    diff[i] = ca[i] - cb[i];
    wins += ca[i] < cb[i] ? 1.0 : (ca[i] == cb[i] ? 0.5 : 0.0);
  }
  const auto s = sample_stats(diff);
  return {a, b, s.mean, s.ci, wins / static_cast<double>(ca.size())};
}

int BenchmarkReport::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < policies.size(); ++i) {
    if (policies[i] == name) return static_cast<int>(i);
  }
  throw InvalidArgument("unknown policy '" + name + "' in report");
}

const PairComparison& BenchmarkReport::pair(const std::string& a, const std::string& b) const {
  for (const auto& p : pairs) {
    if (p.a == a && p.b == b) return p;
  }
  throw InvalidArgument("no comparison between '" + a + "' and '" + b + "'");
}

BenchmarkReport benchmark(const std::vector<const Policy*>& policies, const ScenarioSet& scenarios,
                          const ProblemSpec& spec, int threads,
                          const std::vector<double>& offline_seconds, const TrajectorySink& sink) {
  if (scenarios.size() < 2) throw InvalidArgument("benchmark needs at least 2 scenarios");
  if (policies.empty()) throw InvalidArgument("benchmark needs at least one policy");
  const int N = scenarios.size();
  const int P = static_cast<int>(policies.size());
  BenchmarkReport rep;
  rep.scenario_ids = scenarios.ids;
  rep.costs.assign(P, std::vector<double>(N, 0.0));
  rep.offline_seconds = offline_seconds;
  rep.offline_seconds.resize(P, 0.0);
  for (int p = 0; p < P; ++p) {
    rep.policies.push_back(policies[p]->name());
    rep.variants.push_back(policies[p]->variant());
    std::vector<double> seconds(N, 0.0);
    std::vector<int> unserved(N, 0);
    std::vector<SimulationResult> kept(sink ? N : 0);
    parallel_for(N, threads, [&](int i) {
      auto r = simulate(*policies[p], scenarios.values[i], spec, scenarios.ids[i]);
      rep.costs[p][i] = r.total_cost;
      seconds[i] = r.decision_seconds;
      unserved[i] = r.unserved_events;
      if (sink) kept[i] = std::move(r);
    });
    if (sink) {
      for (const auto& r : kept) sink(rep.policies[p], r);
    }
    double total = 0.0;
    int events = 0;
    for (int i = 0; i < N; ++i) {
      total += seconds[i];
      events += unserved[i];
    }
    rep.online_ms_per_decision.push_back(1e3 * total / (static_cast<double>(N) * spec.horizon()));
    rep.unserved_events.push_back(events);
    rep.stats.push_back(sample_stats(rep.costs[p]));
  }
  for (int a = 0; a < P; ++a) {
    for (int b = a + 1; b < P; ++b) {
      rep.pairs.push_back(compare(rep.policies[a], rep.costs[a], rep.policies[b], rep.costs[b]));
    }
  }
  return rep;
}

Histogram cost_difference_histogram(const BenchmarkReport& report, const std::string& a,
                                    const std::string& b, int bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  const auto& ca = report.costs.at(report.index_of(a));
  const auto& cb = report.costs.at(report.index_of(b));
  std::vector<double> d(ca.size());
  double wins = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    d[i] = ca[i] - cb[i];
    wins += ca[i] < cb[i] ? 1.0 : (ca[i] == cb[i] ? 0.5 : 0.0);
  }
  Histogram h;
  h.beat_fraction = wins / static_cast<double>(d.size());
  h.lo = *std::min_element(d.begin(), d.end());
  h.hi = *std::max_element(d.begin(), d.end());
  if (h.hi == h.lo) {
    h.counts = {static_cast<long long>(d.size())};
    return h;
  }
  h.width = (h.hi - h.lo) / bins;
  h.counts.assign(bins, 0);
  for (double v : d) {
    int k = static_cast<int>((v - h.lo) / h.width);
    ++h.counts[std::clamp(k, 0, bins - 1)];
  }
  return h;
}

void save_report_csv(const BenchmarkReport& r, const std::string& path) {
  auto out = csv::open_for_write(path);
  out << "policy,variant,n,mean_cost,sd,ci95,unserved_events\n";
  for (std::size_t p = 0; p < r.policies.size(); ++p) {
    out << r.policies[p] << ',' << (p < r.variants.size() ? r.variants[p] : "") << ','
        << r.costs[p].size() << ',' << csv::format(r.stats[p].mean) << ','
        << csv::format(r.stats[p].sd) << ',' << csv::format(r.stats[p].ci) << ','
        << r.unserved_events[p] << '\n';
  }
}

void save_histogram_csv(const Histogram& h, const std::string& path) {
  auto out = csv::open_for_write(path);
  out << "bin,lower,upper,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    const double lo = h.lo + h.width * static_cast<double>(k);
    const double hi = h.counts.size() == 1 ? h.hi : lo + h.width;
    out << k << ',' << csv::format(lo) << ',' << csv::format(hi) << ',' << h.counts[k] << '\n';
  }
}

void write_trajectory_header(std::ostream& out) {
  out << "scenario_id,step,b,h,theta_w,theta_i,f_b,f_w,f_h,f_ne,cost\n";
}

void write_trajectory_rows(std::ostream& out, const SimulationResult& r) {
  const int T = static_cast<int>(r.controls.size());
  for (int t = 0; t <= T; ++t) {
    const auto& x = r.states[t];
    out << r.scenario_id << ',' << t << ',' << csv::format(x.b) << ',' << csv::format(x.h) << ','
        << csv::format(x.theta_w) << ',' << csv::format(x.theta_i) << ',';
    if (t < T) {
      const auto& u = r.controls[t];
      out << csv::format(u.f_b) << ',' << csv::format(u.f_w) << ',' << csv::format(u.f_h) << ','
          << csv::format(r.net_imports[t]) << ',' << csv::format(r.stage_costs[t]) << '\n';
    } else {
      out << ",,,," << csv::format(r.final_cost) << '\n';
    }
  }
}

}  // namespace mgems
