// Independent reference computations used by unit and acceptance tests.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "mgems/lp.hpp"
#include "mgems/physical_model.hpp"

namespace mgems::oracle {

// Envelope ODE written out term by term, SI units, f_h in kW.
inline std::array<double, 2> envelope_rhs(const std::array<double, 2>& th, double f_h,
                                          const ExogenousInputs& e, const PhysicalParams& p) {
  const double tw = th[0];
  const double ti = th[1];
  const double wall = (ti - tw) / (p.r_i + p.r_s) + (e.theta_e - tw) / (p.r_m + p.r_e) +
                      p.gamma * f_h * 1000.0 + p.r_i / (p.r_i + p.r_s) * e.phi_int +
                      p.r_e / (p.r_e + p.r_m) * e.phi_ext;
  const double indoor = (tw - ti) / (p.r_i + p.r_s) + (e.theta_e - ti) / p.r_v +
                        (e.theta_e - ti) / p.r_f + (1.0 - p.gamma) * f_h * 1000.0 +
                        p.r_s / (p.r_i + p.r_s) * e.phi_int;
  return {wall / p.c_m, indoor / p.c_i};
}

/// Classical RK4 over `seconds` with `substeps` equal steps, inputs held constant.
inline std::array<double, 2> rk4_envelope(std::array<double, 2> th, double f_h,
                                          const ExogenousInputs& e, const PhysicalParams& p,
                                          double seconds, int substeps) {
  const double h = seconds / substeps;
  auto add = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double s) {
    return std::array<double, 2>{a[0] + s * b[0], a[1] + s * b[1]};
  };
  for (int k = 0; k < substeps; ++k) {
    const auto k1 = envelope_rhs(th, f_h, e, p);
    const auto k2 = envelope_rhs(add(th, k1, h / 2), f_h, e, p);
    const auto k3 = envelope_rhs(add(th, k2, h / 2), f_h, e, p);
    const auto k4 = envelope_rhs(add(th, k3, h), f_h, e, p);
    for (int i = 0; i < 2; ++i) th[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return th;
}

/// Central finite-difference Jacobian of f: R^n -> R^m.
inline std::vector<std::vector<double>> fd_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, double step) {
  const auto f0 = f(x);
  std::vector<std::vector<double>> jac(f0.size(), std::vector<double>(x.size(), 0.0));
  for (std::size_t j = 0; j < x.size(); ++j) {
    auto xp = x;
    auto xm = x;
    xp[j] += step;
    xm[j] -= step;
    const auto fp = f(xp);
    const auto fm = f(xm);
    for (std::size_t i = 0; i < f0.size(); ++i) jac[i][j] = (fp[i] - fm[i]) / (2 * step);
  }
  return jac;
}

/// Solves a small dense linear system by Gaussian elimination; false when singular.
inline bool gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-10) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return true;
}

struct VertexResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

/// Brute-force minimum over all basic solutions of an LP with finite variable bounds.
/// Every constraint (rows and bounds) is written as an equation candidate; each choice of
/// n linearly independent candidates gives a vertex, kept when it satisfies everything.
inline VertexResult enumerate_vertices(const lp::LinearProgram& lp, double tol = 1e-9) {
  const int n = lp.num_variables();
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (int r = 0; r < lp.num_rows(); ++r) {
    std::vector<double> a(n, 0.0);
    for (const auto& t : lp.row(r).terms) a[t.col] += t.coef;
    planes.push_back({a, lp.row(r).rhs});
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = 1.0;
    planes.push_back({a, lp.variable(j).lower});
    planes.push_back({a, lp.variable(j).upper});
  }
  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
      if (x[j] < lp.variable(j).lower - tol || x[j] > lp.variable(j).upper + tol) return false;
    }
    for (int r = 0; r < lp.num_rows(); ++r) {
      const double act = lp.row_activity(r, x);
      const auto& row = lp.row(r);
      const double scale = 1.0 + std::abs(row.rhs);
      if (row.sense == lp::Sense::kLessEqual && act > row.rhs + tol * scale) return false;
      if (row.sense == lp::Sense::kGreaterEqual && act < row.rhs - tol * scale) return false;
      if (row.sense == lp::Sense::kEqual && std::abs(act - row.rhs) > tol * scale) return false;
    }
    return true;
  };
  VertexResult best;
  const int k = static_cast<int>(planes.size());
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (int idx : pick) {
        a.push_back(planes[idx].a);
        b.push_back(planes[idx].b);
      }
      std::vector<double> x;
      if (!gauss_solve(a, b, x)) return;
      if (!feasible(x)) return;
      best.feasible = true;
      best.objective = std::min(best.objective, lp.objective(x));
      return;
    }
    for (int i = start; i < k; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Random LP with <= max_vars boxed variables and <= max_rows rows of mixed senses.
inline lp::LinearProgram random_lp(std::mt19937_64& rng, int max_vars, int max_rows) {
  std::uniform_int_distribution<int> nv(1, max_vars);
  std::uniform_int_distribution<int> nr(1, max_rows);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> sense(0, 2);
  lp::LinearProgram lp("random");
  const int n = nv(rng);
  const int m = nr(rng);
  for (int j = 0; j < n; ++j) {
    const double lo = std::round(coef(rng));
    const double hi = lo + std::round(1.0 + 5.0 * unit(rng));
    lp.add_variable(lo, hi, std::round(coef(rng) * 10) / 10);
  }
  // a random interior point keeps most instances feasible, equality rows included
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    x0[j] = lp.variable(j).lower + unit(rng) * (lp.variable(j).upper - lp.variable(j).lower);
  }
  for (int r = 0; r < m; ++r) {
    std::vector<lp::Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < 0.3) continue;
      const double c = std::round(coef(rng) * 4) / 4;
      if (c == 0.0) continue;
      terms.push_back({j, c});
      act += c * x0[j];
    }
    const int s = sense(rng);
    const double slack = std::round(unit(rng) * 3 * 4) / 4;
    if (s == 0) {
      lp.add_row(terms, lp::Sense::kLessEqual, std::round((act + slack - 1.0) * 4) / 4);
    } else if (s == 1) {
      lp.add_row(terms, lp::Sense::kGreaterEqual, std::round((act - slack + 1.0) * 4) / 4);
    } else {
      lp.add_row(terms, lp::Sense::kEqual, act);
    }
  }
  return lp;
}

// Golden-section minimum of a unimodal function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iterations = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations && b - a > 1e-15 * (1.0 + std::abs(a)); ++k) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Least-squares line y ~ a*x + b by nested numerical minimization of the squared residual.
inline std::array<double, 2> least_squares_line(const std::vector<double>& x,
                                                const std::vector<double>& y, double range) {
  auto sse = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (y[i] - a * x[i] - b) * (y[i] - a * x[i] - b);
    return s;
  };
  auto best_b = [&](double a) { return golden_min([&](double b) { return sse(a, b); }, -range, range); };
  const double a = golden_min([&](double a) { return sse(a, best_b(a)); }, -range, range);
  return {a, best_b(a)};
}

}  // namespace mgems::oracle
