#include "mgems/scenarios.hpp"

#include <cmath>
#include <random>

#include "mgems/csv.hpp"
#include "mgems/distribution.hpp"
#include "mgems/error.hpp"

namespace mgems {

void ScenarioSet::validate(int horizon_steps) const {
  if (ids.size() != values.size()) throw InvalidArgument("scenario ids and values differ in size");
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (static_cast<int>(values[n].size()) != horizon_steps) {
      throw InvalidArgument("scenario " + std::to_string(ids[n]) + " has " +
                            std::to_string(values[n].size()) + " steps, expected " +
                            std::to_string(horizon_steps));
    }
    for (const auto& w : values[n]) {
      if (!std::isfinite(w.d_el_net) || !std::isfinite(w.d_th) || w.d_th < 0) {
        throw InvalidArgument("scenario " + std::to_string(ids[n]) +
                              " has a non-finite value or negative hot-water demand");
      }
    }
  }
}

std::vector<Uncertainty> ScenarioSet::column_means() const {
  std::vector<Uncertainty> m(horizon());
  if (values.empty()) return m;
  for (const auto& row : values) {
    for (int t = 0; t < horizon(); ++t) {
      m[t].d_el_net += row[t].d_el_net;
      m[t].d_th += row[t].d_th;
    }
  }
  for (auto& w : m) {
    w.d_el_net /= size();
    w.d_th /= size();
  }
  return m;
}

ScenarioSet ScenarioSet::slice(int first, int count) const {
  if (first < 0 || count < 0 || first + count > size()) {
    throw InvalidArgument("scenario slice out of range");
  }
  ScenarioSet s;
  s.ids.assign(ids.begin() + first, ids.begin() + first + count);
  s.values.assign(values.begin() + first, values.begin() + first + count);
  return s;
}

void ScenarioSet::save_csv(const std::string& path) const {
  auto out = csv::open_for_write(path);
  out << "scenario_id,step,d_el_net,d_th\n";
  for (std::size_t n = 0; n < values.size(); ++n) {
    for (std::size_t t = 0; t < values[n].size(); ++t) {
      out << ids[n] << ',' << t << ',' << csv::format(values[n][t].d_el_net) << ','
          << csv::format(values[n][t].d_th) << '\n';
    }
  }
}

ScenarioSet ScenarioSet::load_csv(const std::string& path) {
  const auto table = csv::read(path);
  csv::require_header(table, {"scenario_id", "step", "d_el_net", "d_th"}, path);
  ScenarioSet s;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const int id = static_cast<int>(table.integer(r, 0));
    const long long step = table.integer(r, 1);
    if (s.ids.empty() || s.ids.back() != id) {
      s.ids.push_back(id);
      s.values.emplace_back();
    }
    if (step != static_cast<long long>(s.values.back().size())) {
      throw IoError(path + ": steps of scenario " + std::to_string(id) + " must be 0, 1, ...");
    }
    s.values.back().push_back({table.number(r, 2), table.number(r, 3)});
  }
  return s;
}

ScenarioSplit split_scenarios(const ScenarioSet& all, int n_opt) {
  if (n_opt < 1 || n_opt >= all.size()) {
    throw InvalidArgument("optimization count must leave at least one scenario on each side");
  }
  return {all.slice(0, n_opt), all.slice(n_opt, all.size() - n_opt)};
}

void DemandProfile::validate() const {
  const auto T = el_mean.size();
  if (T == 0 || el_sigma.size() != T || th_base.size() != T || shower_prob.size() != T) {
    throw InvalidArgument("demand profile arrays must be non-empty and of equal length");
  }
  for (std::size_t t = 0; t < T; ++t) {
    if (!(el_mean[t] >= 0) || !(el_sigma[t] >= 0) || !(th_base[t] >= 0) ||
        !(shower_prob[t] >= 0 && shower_prob[t] <= 1)) {
      throw InvalidArgument("demand profile: negative mean or dispersion at step " +
                            std::to_string(t));
    }
  }
  if (!(std::abs(el_correlation) < 1.0)) throw InvalidArgument("el_correlation must lie in (-1, 1)");
  if (!(th_sigma >= 0) || !(shower_kw >= 0)) {
    throw InvalidArgument("th_sigma and shower_kw must be >= 0");
  }
}

std::vector<double> DemandProfile::th_expectation() const {
  std::vector<double> m(th_base.size());
  for (std::size_t t = 0; t < m.size(); ++t) m[t] = th_base[t] + shower_kw * shower_prob[t];
  return m;
}

DemandProfile DemandProfile::without_noise() const {
  DemandProfile p = *this;
  p.el_sigma.assign(el_sigma.size(), 0.0);
  p.th_base = th_expectation();
  p.th_sigma = 0.0;
  p.shower_prob.assign(shower_prob.size(), 0.0);
  return p;
}

ScenarioSet generate_demand(const DemandProfile& profile, int n, std::uint64_t seed) {
  profile.validate();
  if (n < 1) throw InvalidArgument("scenario count must be >= 1");
  const int T = profile.horizon();
  const double rho = profile.el_correlation;
  const double innovation = std::sqrt(1.0 - rho * rho);
  ScenarioSet s;
  s.ids.resize(n);
  s.values.assign(n, std::vector<Uncertainty>(T));
  for (int i = 0; i < n; ++i) {
    s.ids[i] = i;
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double z = normal(rng);
    for (int t = 0; t < T; ++t) {
      if (t > 0) z = rho * z + innovation * normal(rng);
      const double y = normal(rng);
      const double u = uniform(rng);
      const double se = profile.el_sigma[t];
      const double el = profile.el_mean[t] * std::exp(se * z - 0.5 * se * se);
      const double st = profile.th_sigma;
      double th = profile.th_base[t] * std::exp(st * y - 0.5 * st * st);
      if (u < profile.shower_prob[t]) th += profile.shower_kw;
      s.values[i][t] = {el, th};
    }
  }
  return s;
}

}  // namespace mgems
