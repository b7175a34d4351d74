#include "mgems_tools/config.hpp"

#include <toml.hpp>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace mgems::tools {

namespace {

/// One TOML table; every key read is recorded so leftovers can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const toml::node* n = find(key);
    if (!n) return;
    if constexpr (std::is_same_v<T, bool>) {
      if (auto v = n->value_exact<bool>()) {
        out = *v;
        return;
      }
      fail(key, "a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto v = n->value_exact<std::string>()) {
        out = *v;
        return;
      }
      fail(key, "a string");
    } else if constexpr (std::is_same_v<T, double>) {
      if (auto v = n->value_exact<double>()) {
        out = *v;
        return;
      }
      if (auto v = n->value_exact<std::int64_t>()) {
        out = static_cast<double>(*v);
        return;
      }
      fail(key, "a number");
    } else {
      static_assert(std::is_integral_v<T>);
      if (auto v = n->value_exact<std::int64_t>()) {
        if (*v < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
            static_cast<std::uint64_t>(*v) > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
          throw ConfigError("key '" + key_path(key) + "' is out of range");
        }
        out = static_cast<T>(*v);
        return;
      }
      fail(key, "an integer");
    }
  }

  void read(const std::string& key, std::optional<double>& out) {
    double v = 0.0;
    if (!find(key)) return;
    read(key, v);
    out = v;
  }

  void read(const std::string& key, std::vector<double>& out) {
    const auto* arr = array(key);
    if (!arr) return;
    out.clear();
    for (const auto& e : *arr) {
      if (auto v = e.value<double>()) {
        out.push_back(*v);
      } else {
        fail(key, "an array of numbers");
      }
    }
  }

  void read(const std::string& key, std::vector<std::string>& out) {
    const auto* arr = array(key);
    if (!arr) return;
    out.clear();
    for (const auto& e : *arr) {
      if (auto v = e.value_exact<std::string>()) {
        out.push_back(*v);
      } else {
        fail(key, "an array of strings");
      }
    }
  }

  Section sub(const std::string& key) {
    const toml::node* n = find(key);
    if (n && !n->is_table()) fail(key, "a table");
    return Section(n ? n->as_table() : nullptr, key_path(key));
  }

  /// Throws on the first key that was never read.
  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      const std::string key(k.str());
      if (!used_.count(key)) {
        throw ConfigError("unknown key '" + key_path(key) + "'" + where(v));
      }
    }
  }

 private:
  const toml::node* find(const std::string& key) {
    used_.insert(key);
    return table_ ? table_->get(key) : nullptr;
  }

  const toml::array* array(const std::string& key) {
    const toml::node* n = find(key);
    if (!n) return nullptr;
    if (!n->is_array()) fail(key, "an array");
    return n->as_array();
  }

  static std::string where(const toml::node& n) {
    const auto& src = n.source();
    if (!src.begin) return {};
    return " (line " + std::to_string(src.begin.line) + ")";
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("key '" + key_path(key) + "' must be " + what +
                      where(*table_->get(key)));
  }

  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_policies(const std::vector<std::string>& names, const std::string& key) {
  check(!names.empty(), key + " must name at least one policy");
  std::set<std::string> seen;
  for (const auto& n : names) {
    bool known = false;
    for (const auto& k : known_policies()) known = known || k == n;
    check(known, key + ": unknown policy '" + n + "' (expected sddp, mpc or rule_based)");
    check(seen.insert(n).second, key + ": policy '" + n + "' listed twice");
  }
}

void read_physical(Section s, PhysicalParams& p) {
  s.read("rho_c", p.rho_c);
  s.read("rho_d", p.rho_d);
  s.read("b_min", p.b_min);
  s.read("b_max", p.b_max);
  s.read("fb_max", p.fb_max);
  s.read("tank_volume_l", p.tank_volume_l);
  s.read("tank_delta_k", p.tank_delta_k);
  p.h_max = tank_capacity_kwh(p.tank_volume_l, p.tank_delta_k);
  s.read("beta_h", p.beta_h);
  s.read("fw_max", p.fw_max);
  s.read("r_i", p.r_i);
  s.read("r_s", p.r_s);
  s.read("r_m", p.r_m);
  s.read("r_e", p.r_e);
  s.read("r_v", p.r_v);
  s.read("r_f", p.r_f);
  s.read("c_i", p.c_i);
  s.read("c_m", p.c_m);
  s.read("gamma", p.gamma);
  s.read("fh_max", p.fh_max);
  std::string scheme = to_string(p.thermal_scheme);
  s.read("thermal_scheme", scheme);
  p.thermal_scheme = parse_thermal_scheme(scheme);
  s.read("panel_area_m2", p.panel_area_m2);
  s.read("panel_yield", p.panel_yield);
  s.finish();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << origin << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
  ExperimentConfig c;
  c.text = text;
  try {
    Section top(&root, "");
    top.read("seed", c.seed);
    top.read("output_dir", c.output_dir);

    auto day = top.sub("day");
    std::string preset = to_string(c.day);
    day.read("preset", preset);
    c.day = parse_day_preset(preset);
    auto& o = c.day_overrides;
    day.read("mean_outdoor_c", o.mean_outdoor_c);
    day.read("outdoor_swing_c", o.outdoor_swing_c);
    day.read("pv_energy_kwh", o.pv_energy_kwh);
    day.read("window_aperture_m2", o.window_aperture_m2);
    day.read("wall_aperture_m2", o.wall_aperture_m2);
    day.read("b0", o.b0);
    day.read("h0", o.h0);
    day.read("theta_w0", o.theta_w0);
    day.read("theta_i0", o.theta_i0);
    day.finish();

    auto grid = top.sub("grid");
    grid.read("delta_hours", c.grid.delta_hours);
    grid.read("horizon_steps", c.grid.horizon_steps);
    grid.read("start_step", c.grid.start_step);
    grid.finish();

    read_physical(top.sub("physical"), c.physical);

    auto costs = top.sub("costs");
    auto& tf = c.tariff;
    costs.read("on_peak_price", tf.on_peak_price);
    costs.read("off_peak_price", tf.off_peak_price);
    costs.read("on_peak_start_hour", tf.on_peak_start_hour);
    costs.read("on_peak_end_hour", tf.on_peak_end_hour);
    costs.read("discomfort_price", tf.discomfort_price);
    costs.read("day_setpoint", tf.day_setpoint);
    costs.read("night_setpoint", tf.night_setpoint);
    costs.read("day_start_hour", tf.day_start_hour);
    costs.read("day_end_hour", tf.day_end_hour);
    costs.read("kappa", c.kappa);
    costs.read("unserved_penalty", c.unserved_penalty);
    costs.finish();

    auto demand = top.sub("demand");
    demand.read("el_sigma", c.demand.el_sigma);
    demand.read("el_correlation", c.demand.el_correlation);
    demand.read("th_sigma", c.demand.th_sigma);
    demand.read("shower_kw", c.demand.shower_kw);
    demand.finish();

    auto sc = top.sub("scenarios");
    sc.read("n_optimization", c.scenarios.n_optimization);
    sc.read("n_assessment", c.scenarios.n_assessment);
    sc.read("demand_noise", c.scenarios.demand_noise);
    sc.read("solar_sigma_0", c.scenarios.solar_sigma_0);
    sc.read("solar_sigma_T", c.scenarios.solar_sigma_T);
    sc.read("atoms", c.scenarios.atoms);
    sc.finish();

    auto sddp = top.sub("sddp");
    sddp.read("max_iterations", c.sddp.max_iterations);
    sddp.read("gap_tolerance", c.sddp.gap_tolerance);
    sddp.read("ub_eval_scenarios", c.sddp.ub_eval_scenarios);
    sddp.read("ub_check_period", c.sddp.ub_check_period);
    sddp.read("forward_passes_per_iteration", c.sddp.forward_passes_per_iteration);
    sddp.read("confidence_z", c.sddp.confidence_z);
    std::string law = to_string(c.online_law);
    sddp.read("online_law", law);
    c.online_law = parse_online_law(law);
    sddp.read("residual_atoms", c.residual_atoms);
    sddp.finish();

    auto rule = top.sub("rule_based");
    rule.read("margin", c.rule_margin);
    rule.finish();

    auto as = top.sub("assess");
    as.read("policies", c.assess.policies);
    as.read("histogram_bins", c.assess.histogram_bins);
    as.read("histogram_a", c.assess.histogram_a);
    as.read("histogram_b", c.assess.histogram_b);
    as.read("trajectories", c.assess.trajectories);
    as.finish();

    auto sw = top.sub("sweep");
    sw.read("sigma_T", c.sweep.sigma_T);
    sw.read("sigma_0", c.sweep.sigma_0);
    sw.read("n_assessment", c.sweep.n_assessment);
    sw.read("demand_noise", c.sweep.demand_noise);
    sw.read("policies", c.sweep.policies);
    sw.finish();

    top.finish();

    c.grid.validate();
    c.physical.validate();
    c.sddp.validate();
    make_cost_params(c.tariff, c.grid, c.kappa, c.unserved_penalty).validate(c.grid.horizon_steps);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  check(c.scenarios.n_optimization >= 2, "scenarios.n_optimization must be >= 2");
  check(c.scenarios.n_assessment >= 2, "scenarios.n_assessment must be >= 2");
  check(c.scenarios.atoms >= 1, "scenarios.atoms must be >= 1");
  check(c.scenarios.solar_sigma_0 >= 0 && c.scenarios.solar_sigma_T >= 0,
        "scenarios.solar_sigma_0 and solar_sigma_T must be >= 0");
  check(c.residual_atoms >= 1, "sddp.residual_atoms must be >= 1");
  check(c.rule_margin >= 0, "rule_based.margin must be >= 0");
  check(c.demand.el_sigma >= 0 && c.demand.th_sigma >= 0 && c.demand.shower_kw >= 0,
        "demand dispersions must be >= 0");
  check(c.demand.el_correlation > -1 && c.demand.el_correlation < 1,
        "demand.el_correlation must lie in (-1, 1)");
  check_policies(c.assess.policies, "assess.policies");
  check_policies({c.assess.histogram_a}, "assess.histogram_a");
  check_policies({c.assess.histogram_b}, "assess.histogram_b");
  check(c.assess.histogram_bins >= 1, "assess.histogram_bins must be >= 1");
  check_policies(c.sweep.policies, "sweep.policies");
  check(!c.sweep.sigma_T.empty(), "sweep.sigma_T must not be empty");
  for (double s : c.sweep.sigma_T) check(s >= 0, "sweep.sigma_T values must be >= 0");
  check(c.sweep.sigma_0 >= 0, "sweep.sigma_0 must be >= 0");
  check(c.sweep.n_assessment >= 2, "sweep.n_assessment must be >= 2");
  check(!c.output_dir.empty(), "output_dir must not be empty");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest '" + path + "': " + e.what());
    }
    if (!manifest.contains("config") || !manifest["config"].is_string()) {
      throw ConfigError("manifest '" + path + "' has no embedded config");
    }
    return parse_config(manifest["config"].get<std::string>(), path);
  }
  return parse_config(content, path);
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace mgems::tools
