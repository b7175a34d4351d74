#include "mgems_tools/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>

#include "mgems/ar1.hpp"
#include "mgems/assessment.hpp"
#include "mgems/csv.hpp"
#include "mgems/distribution.hpp"
#include "mgems/mpc_policy.hpp"
#include "mgems/quantize.hpp"
#include "mgems/rule_based_policy.hpp"
#include "mgems/sddp.hpp"
#include "mgems/sddp_policy.hpp"
#include "mgems/value_function_io.hpp"

#ifndef MGEMS_GIT_REVISION
#define MGEMS_GIT_REVISION "unknown"
#endif
#ifndef MGEMS_VERSION
#define MGEMS_VERSION "0.0.0"
#endif

namespace mgems::tools {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string path_in(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

json seeds_json(const Seeds& s) {
  return {{"base", s.base},
          {"scenarios", s.scenarios},
          {"quantization", s.quantization},
          {"sddp", s.sddp},
          {"residuals", s.residuals}};
}

void write_manifest(const RunContext& ctx, const std::string& command, json body) {
  body["tool"] = "mgems";
  body["version"] = MGEMS_VERSION;
  body["git_revision"] = MGEMS_GIT_REVISION;
  body["command"] = command;
  body["config_path"] = ctx.config_path;
  body["config_hash"] = content_hash(ctx.cfg.text);
  body["config"] = ctx.cfg.text;
  body["threads"] = ctx.threads;
  auto out = csv::open_for_write(path_in(ctx.out_dir, "manifest_" + command + ".json"));
  out << body.dump(2) << '\n';
}

ScenarioSet load_scenarios(const fs::path& dir, const std::string& name, int horizon) {
  const auto path = dir / name;
  if (!fs::exists(path)) {
    throw MissingArtifact("missing " + path.string() + "; run `mgems generate` first");
  }
  auto s = ScenarioSet::load_csv(path.string());
  s.validate(horizon);
  return s;
}

SddpConfig sddp_config(const ExperimentConfig& cfg, const Seeds& seeds) {
  SddpConfig c = cfg.sddp;
  c.rng_seed = seeds.sddp;
  return c;
}

json training_summary(const TrainedValueFunctions& vf, double seconds) {
  return {{"converged", vf.converged},
          {"iterations", vf.iterations},
          {"final_gap", vf.final_gap},
          {"lower_bound", vf.log.empty() ? 0.0 : vf.log.back().lower_bound},
          {"seconds", seconds}};
}

/// Policies built from the optimization scenarios; owns everything the policies point to.
struct PolicySet {
  std::vector<DiscreteDistribution> dists;
  std::unique_ptr<SddpPolicy> sddp;
  std::unique_ptr<MpcPolicy> mpc;
  std::unique_ptr<RuleBasedPolicy> rule;
  std::vector<const Policy*> chosen;
  std::vector<double> offline_seconds;
};

void build_policies(PolicySet& ps, const ExperimentConfig& cfg, const ProblemSpec& spec,
                    const ScenarioSet& opt, const std::vector<PolyhedralFunction>* value,
                    double training_seconds, const Seeds& seeds,
                    const std::vector<std::string>& names) {
  for (const auto& name : names) {
    const auto t0 = Clock::now();
    if (name == "sddp") {
      if (!value) throw MissingArtifact("sddp needs trained value functions");
      if (ps.dists.empty()) ps.dists = quantize_steps(opt, cfg.scenarios.atoms, seeds.quantization);
      if (cfg.online_law == OnlineLaw::kConditional) {
        auto ar = fit_ar1(opt);
        auto residuals = quantize_residuals(ar, opt, cfg.residual_atoms, seeds.residuals);
        ps.sddp = std::make_unique<SddpPolicy>(spec, *value, ps.dists, std::move(ar),
                                               std::move(residuals));
      } else {
        ps.sddp = std::make_unique<SddpPolicy>(spec, *value, ps.dists);
      }
      ps.chosen.push_back(ps.sddp.get());
      ps.offline_seconds.push_back(training_seconds + seconds_since(t0));
    } else if (name == "mpc") {
      ps.mpc = std::make_unique<MpcPolicy>(
          spec, std::make_shared<ArForecaster>(fit_ar1(opt), opt.column_means()));
      ps.chosen.push_back(ps.mpc.get());
      ps.offline_seconds.push_back(seconds_since(t0));
    } else {
      ps.rule = std::make_unique<RuleBasedPolicy>(spec, cfg.rule_margin);
      ps.chosen.push_back(ps.rule.get());
      ps.offline_seconds.push_back(0.0);
    }
  }
}

json timing_json(const BenchmarkReport& rep) {
  json t = json::object();
  for (std::size_t p = 0; p < rep.policies.size(); ++p) {
    t[rep.policies[p]] = {{"offline_seconds", rep.offline_seconds[p]},
                          {"online_ms_per_decision", rep.online_ms_per_decision[p]}};
  }
  return t;
}

void save_pairs_csv(const BenchmarkReport& rep, const std::string& path) {
  auto out = csv::open_for_write(path);
  out << "policy_a,policy_b,mean_difference,ci95,beat_fraction\n";
  for (const auto& p : rep.pairs) {
    out << p.a << ',' << p.b << ',' << csv::format(p.mean_difference) << ','
        << csv::format(p.ci) << ',' << csv::format(p.beat_fraction) << '\n';
  }
}

void save_scenario_costs_csv(const BenchmarkReport& rep, const std::string& path) {
  auto out = csv::open_for_write(path);
  out << "scenario_id";
  for (const auto& p : rep.policies) out << ',' << p;
  out << '\n';
  for (std::size_t i = 0; i < rep.scenario_ids.size(); ++i) {
    out << rep.scenario_ids[i];
    for (const auto& c : rep.costs) out << ',' << csv::format(c[i]);
    out << '\n';
  }
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

Seeds Seeds::from(std::uint64_t base) {
  return {base, derive_seed(base, 10), derive_seed(base, 11), derive_seed(base, 12),
          derive_seed(base, 13)};
}

Instance build_instance(const ExperimentConfig& cfg, double sigma_0, double sigma_T,
                        bool demand_noise) {
  Instance in;
  try {
    auto& spec = in.spec;
    spec.grid = cfg.grid;
    spec.physical = cfg.physical;
    in.day = day_conditions(cfg.day, spec.physical);
    const auto& o = cfg.day_overrides;
    auto& d = in.day;
    if (o.mean_outdoor_c) d.mean_outdoor_c = *o.mean_outdoor_c;
    if (o.outdoor_swing_c) d.outdoor_swing_c = *o.outdoor_swing_c;
    if (o.pv_energy_kwh) d.pv_energy_kwh = *o.pv_energy_kwh;
    if (o.window_aperture_m2) d.window_aperture_m2 = *o.window_aperture_m2;
    if (o.wall_aperture_m2) d.wall_aperture_m2 = *o.wall_aperture_m2;
    if (o.b0) d.x0.b = *o.b0;
    if (o.h0) d.x0.h = *o.h0;
    if (o.theta_w0) d.x0.theta_w = *o.theta_w0;
    if (o.theta_i0) d.x0.theta_i = *o.theta_i0;
    spec.weather = make_weather(d, spec.physical, spec.grid);
    spec.costs = make_cost_params(cfg.tariff, spec.grid, cfg.kappa, cfg.unserved_penalty);
    spec.x0 = d.x0;
    spec.validate();

    in.demand = default_demand_profile(spec.grid);
    in.demand.el_sigma.assign(spec.horizon(), cfg.demand.el_sigma);
    in.demand.el_correlation = cfg.demand.el_correlation;
    in.demand.th_sigma = cfg.demand.th_sigma;
    in.demand.shower_kw = cfg.demand.shower_kw;
    if (!demand_noise) in.demand = in.demand.without_noise();
    in.demand.validate();
    in.solar = {solar_mean_profile(d, spec.physical, spec.grid), sigma_0, sigma_T};
    in.solar.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return in;
}

Instance build_instance(const ExperimentConfig& cfg) {
  return build_instance(cfg, cfg.scenarios.solar_sigma_0, cfg.scenarios.solar_sigma_T,
                        cfg.scenarios.demand_noise);
}

fs::path resolve_output_dir(const ExperimentConfig& cfg, const std::string& override_dir) {
  fs::path dir = override_dir.empty() ? fs::path(cfg.output_dir) : fs::path(override_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("MGEMS_OUTPUT_ROOT"); root && *root) {
      dir = fs::path(root) / dir;
    }
  }
  return dir;
}

int cmd_generate(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto inst = build_instance(cfg);
  const auto seeds = Seeds::from(cfg.seed);
  const int n_opt = cfg.scenarios.n_optimization;
  const auto composed = compose_scenarios(inst.demand, inst.solar,
                                          n_opt + cfg.scenarios.n_assessment, seeds.scenarios);
  const auto split = split_scenarios(composed.scenarios, n_opt);
  fs::create_directories(ctx.out_dir);
  split.optimization.save_csv(path_in(ctx.out_dir, "scenarios_optimization.csv"));
  split.assessment.save_csv(path_in(ctx.out_dir, "scenarios_assessment.csv"));
  inst.spec.weather.save_csv(path_in(ctx.out_dir, "weather.csv"));
  inst.spec.costs.save_csv(path_in(ctx.out_dir, "tariff.csv"));
  save_solar_profile_csv(inst.solar.mu, path_in(ctx.out_dir, "solar_profile.csv"));
  write_manifest(ctx, "generate",
                 {{"seeds", seeds_json(seeds)},
                  {"solar_clamp_rate", composed.solar.clamp_rate()},
                  {"outputs",
                   {"scenarios_optimization.csv", "scenarios_assessment.csv", "weather.csv",
                    "tariff.csv", "solar_profile.csv"}}});
  std::cout << "generated " << n_opt << " optimization and " << cfg.scenarios.n_assessment
            << " assessment scenarios in " << ctx.out_dir.string() << '\n';
  return kExitOk;
}

int cmd_train(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto inst = build_instance(cfg);
  const auto seeds = Seeds::from(cfg.seed);
  const auto opt = load_scenarios(ctx.out_dir, "scenarios_optimization.csv", inst.spec.horizon());
  const auto t0 = Clock::now();
  const auto dists = quantize_steps(opt, cfg.scenarios.atoms, seeds.quantization);
  const auto vf = train(inst.spec, dists, sddp_config(cfg, seeds));
  const double seconds = seconds_since(t0);
  save_value_functions(vf.value, path_in(ctx.out_dir, "value_functions.txt"));
  save_training_log(vf.log, path_in(ctx.out_dir, "training_log.csv"));
  write_manifest(ctx, "train",
                 {{"seeds", seeds_json(seeds)},
                  {"training", training_summary(vf, seconds)},
                  {"outputs", {"value_functions.txt", "training_log.csv"}}});
  std::cout << "sddp: " << vf.iterations << " iterations, gap " << vf.final_gap
            << (vf.converged ? " (converged)" : " (NOT converged)") << ", " << seconds << " s\n";
  return vf.converged ? kExitOk : kExitNotConverged;
}

int cmd_assess(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto names = ctx.policies.empty() ? cfg.assess.policies : ctx.policies;
  const auto inst = build_instance(cfg);
  const auto seeds = Seeds::from(cfg.seed);
  const int T = inst.spec.horizon();
  const auto opt = load_scenarios(ctx.out_dir, "scenarios_optimization.csv", T);
  const auto assessment = load_scenarios(ctx.out_dir, "scenarios_assessment.csv", T);

  std::vector<PolyhedralFunction> value;
  double training_seconds = 0.0;
  if (contains(names, "sddp")) {
    const auto vpath = ctx.out_dir / "value_functions.txt";
    if (!fs::exists(vpath)) {
      throw MissingArtifact("missing " + vpath.string() + "; run `mgems train` first");
    }
    value = load_value_functions(vpath.string());
    std::ifstream m(ctx.out_dir / "manifest_train.json");
    if (m) {
      const auto j = json::parse(m, nullptr, false);
      if (!j.is_discarded() && j.contains("training")) {
        training_seconds = j["training"].value("seconds", 0.0);
      }
    }
  }
  PolicySet ps;
  build_policies(ps, cfg, inst.spec, opt, value.empty() ? nullptr : &value, training_seconds,
                 seeds, names);

  std::vector<std::unique_ptr<std::ofstream>> traj;
  std::vector<std::string> outputs{"report.csv", "pairs.csv", "scenario_costs.csv"};
  TrajectorySink sink;
  if (cfg.assess.trajectories) {
    for (const auto* p : ps.chosen) {
      const auto file = "trajectories_" + p->name() + ".csv";
      traj.push_back(std::make_unique<std::ofstream>(csv::open_for_write(path_in(ctx.out_dir, file))));
      write_trajectory_header(*traj.back());
      outputs.push_back(file);
    }
    sink = [&](const std::string& policy, const SimulationResult& r) {
      for (std::size_t p = 0; p < ps.chosen.size(); ++p) {
        if (ps.chosen[p]->name() == policy) write_trajectory_rows(*traj[p], r);
      }
    };
  }
  const auto rep = benchmark(ps.chosen, assessment, inst.spec, ctx.threads, ps.offline_seconds, sink);
  traj.clear();

  save_report_csv(rep, path_in(ctx.out_dir, "report.csv"));
  save_pairs_csv(rep, path_in(ctx.out_dir, "pairs.csv"));
  save_scenario_costs_csv(rep, path_in(ctx.out_dir, "scenario_costs.csv"));
  json extra = {{"seeds", seeds_json(seeds)}, {"timing", timing_json(rep)}};
  const auto& ha = cfg.assess.histogram_a;
  const auto& hb = cfg.assess.histogram_b;
  if (ha != hb && contains(names, ha) && contains(names, hb)) {
    const auto h = cost_difference_histogram(rep, ha, hb, cfg.assess.histogram_bins);
    save_histogram_csv(h, path_in(ctx.out_dir, "histogram.csv"));
    outputs.push_back("histogram.csv");
    extra["histogram"] = {{"a", ha}, {"b", hb}, {"beat_fraction", h.beat_fraction}};
  }
  json variants = json::object();
  for (std::size_t p = 0; p < rep.policies.size(); ++p) variants[rep.policies[p]] = rep.variants[p];
  extra["variants"] = variants;
  extra["outputs"] = outputs;
  write_manifest(ctx, "assess", extra);

  for (std::size_t p = 0; p < rep.policies.size(); ++p) {
    std::cout << rep.policies[p] << ": mean " << rep.stats[p].mean << " +- " << rep.stats[p].ci
              << " EUR, " << rep.online_ms_per_decision[p] << " ms/decision\n";
  }
  for (const auto& pr : rep.pairs) {
    std::cout << pr.a << " beats " << pr.b << " on " << 100.0 * pr.beat_fraction
              << "% of scenarios\n";
  }
  return kExitOk;
}

int cmd_sweep(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& sw = cfg.sweep;
  fs::create_directories(ctx.out_dir);
  auto out = csv::open_for_write(path_in(ctx.out_dir, "sweep.csv"));
  out << "sigma_T,policy,mean_cost,ci\n";
  json levels = json::array();
  bool all_converged = true;
  for (std::size_t k = 0; k < sw.sigma_T.size(); ++k) {
    const double sigma = sw.sigma_T[k];
    const auto inst = build_instance(cfg, sw.sigma_0, sigma, sw.demand_noise);
    const auto seeds = Seeds::from(derive_seed(cfg.seed, 100 + k));
    const int n_opt = cfg.scenarios.n_optimization;
    const auto composed =
        compose_scenarios(inst.demand, inst.solar, n_opt + sw.n_assessment, seeds.scenarios);
    const auto split = split_scenarios(composed.scenarios, n_opt);

    TrainedValueFunctions vf;
    double train_seconds = 0.0;
    if (contains(sw.policies, "sddp")) {
      const auto t0 = Clock::now();
      const auto dists = quantize_steps(split.optimization, cfg.scenarios.atoms, seeds.quantization);
      vf = train(inst.spec, dists, sddp_config(cfg, seeds));
      train_seconds = seconds_since(t0);
      all_converged = all_converged && vf.converged;
    }
    PolicySet ps;
    build_policies(ps, cfg, inst.spec, split.optimization, vf.value.empty() ? nullptr : &vf.value,
                   train_seconds, seeds, sw.policies);
    const auto rep =
        benchmark(ps.chosen, split.assessment, inst.spec, ctx.threads, ps.offline_seconds);
    for (std::size_t p = 0; p < rep.policies.size(); ++p) {
      out << csv::format(sigma) << ',' << rep.policies[p] << ',' << csv::format(rep.stats[p].mean)
          << ',' << csv::format(rep.stats[p].ci) << '\n';
      std::cout << "sigma_T=" << sigma << ' ' << rep.policies[p] << ": " << rep.stats[p].mean
                << " +- " << rep.stats[p].ci << '\n';
    }
    json level = {{"sigma_T", sigma},
                  {"seeds", seeds_json(seeds)},
                  {"timing", timing_json(rep)},
                  {"solar_clamp_rate", composed.solar.clamp_rate()}};
    if (contains(sw.policies, "sddp")) level["training"] = training_summary(vf, train_seconds);
    levels.push_back(level);
  }
  out.close();
  write_manifest(ctx, "sweep", {{"levels", levels}, {"outputs", {"sweep.csv"}}});
  return all_converged ? kExitOk : kExitNotConverged;
}

}  // namespace mgems::tools
