#include "mgems/ar1.hpp"

#include <algorithm>
#include <cmath>

#include "mgems/error.hpp"

namespace mgems {

namespace {

double component(const Uncertainty& w, int d) { return d == 0 ? w.d_el_net : w.d_th; }

}  // namespace

int Ar1Model::degenerate_count() const {
  int c = 0;
  for (const auto& s : steps) c += (s[0].degenerate ? 1 : 0) + (s[1].degenerate ? 1 : 0);
  return c;
}

Uncertainty Ar1Model::predict(int t, const Uncertainty& w) const {
  const auto& s = steps.at(t);
  return {s[0].alpha * w.d_el_net + s[0].beta, std::max(0.0, s[1].alpha * w.d_th + s[1].beta)};
}

Ar1Model fit_ar1(const ScenarioSet& opt) {
  if (opt.size() < 2) throw InvalidArgument("AR(1) fit needs at least 2 scenarios");
  const int T = opt.horizon();
  const int n = opt.size();
  Ar1Model model;
  model.steps.resize(std::max(0, T - 1));
  for (int t = 0; t + 1 < T; ++t) {
    for (int d = 0; d < 2; ++d) {
      double mx = 0.0, my = 0.0;
      for (const auto& row : opt.values) {
        mx += component(row[t], d);
        my += component(row[t + 1], d);
      }
      mx /= n;
      my /= n;
      double sxx = 0.0, sxy = 0.0;
      for (const auto& row : opt.values) {
        const double dx = component(row[t], d) - mx;
        sxx += dx * dx;
        sxy += dx * (component(row[t + 1], d) - my);
      }
      auto& c = model.steps[t][d];
      if (sxx <= 1e-12 * n * (1.0 + mx * mx)) {
        c.alpha = 0.0;
        c.beta = my;
        c.degenerate = true;
      } else {
        c.alpha = sxy / sxx;
        c.beta = my - c.alpha * mx;
      }
      double rs = 0.0, rss = 0.0;
      for (const auto& row : opt.values) {
        const double r = component(row[t + 1], d) - c.alpha * component(row[t], d) - c.beta;
        rs += r;
        rss += r * r;
      }
      c.residual_mean = rs / n;
      c.residual_sd = std::sqrt(std::max(0.0, rss / n - c.residual_mean * c.residual_mean));
    }
  }
  return model;
}

std::vector<Uncertainty> mpc_forecast(const Ar1Model& ar, const std::vector<Uncertainty>& means,
                                      int t, const std::vector<Uncertainty>& history) {
  const int T = static_cast<int>(means.size());
  if (t < 0 || t >= T) throw InvalidArgument("forecast step out of range");
  if (static_cast<int>(history.size()) < t) throw InvalidArgument("history shorter than t");
  std::vector<Uncertainty> f(means.begin() + t, means.end());
  if (t > 0) f[0] = ar.predict(t - 1, history[t - 1]);
  return f;
}

}  // namespace mgems
