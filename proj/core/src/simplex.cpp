#include "mgems/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "basis_factor.hpp"
#include "mgems/error.hpp"

namespace mgems::lp {

Simplex::Simplex(const LinearProgram& lp, SimplexOptions options)
    : opt_(options), factor_(std::make_unique<detail::BasisFactor>()) {
  lp.validate();
  n_ = lp.num_variables();
  m_ = 0;
  offset_ = lp.offset();
  cols_.assign(n_, {});
  for (int j = 0; j < n_; ++j) {
    const auto& v = lp.variable(j);
    lo_.push_back(v.lower);
    hi_.push_back(v.upper);
    cost_.push_back(v.cost);
  }
  for (int r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.row(r);
    for (const auto& t : row.terms) {
      if (t.coef != 0.0) cols_[t.col].push_back({r, t.coef});
    }
    sense_.push_back(row.sense);
    lo_.push_back(0.0);
    hi_.push_back(0.0);
    cost_.push_back(0.0);
    ++m_;
    set_logical_bounds(r, row.sense, row.rhs);
  }
  // a column may list the same row twice; merge duplicates
  for (auto& col : cols_) {
    std::stable_sort(col.begin(), col.end(),
                     [](const Entry& a, const Entry& b) { return a.row < b.row; });
    std::vector<Entry> merged;
    for (const auto& e : col) {
      if (!merged.empty() && merged.back().row == e.row) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    col = std::move(merged);
  }
  slack_basis();
}

Simplex::~Simplex() = default;

Simplex::Simplex(const Simplex& other)
    : opt_(other.opt_),
      n_(other.n_),
      m_(other.m_),
      offset_(other.offset_),
      cols_(other.cols_),
      sense_(other.sense_),
      lo_(other.lo_),
      hi_(other.hi_),
      cost_(other.cost_),
      x_(other.x_),
      state_(other.state_),
      head_(other.head_),
      pos_(other.pos_),
      y_(other.y_),
      d_(other.d_),
      factor_(std::make_unique<detail::BasisFactor>(*other.factor_)),
      factor_valid_(other.factor_valid_),
      primal_valid_(other.primal_valid_),
      iterations_(0),
      total_iterations_(0) {}

Simplex& Simplex::operator=(const Simplex& other) {
  if (this != &other) {
    Simplex copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Simplex::Simplex(Simplex&&) noexcept = default;
Simplex& Simplex::operator=(Simplex&&) noexcept = default;

void Simplex::set_logical_bounds(int row, Sense sense, double rhs) {
  const int j = n_ + row;
  switch (sense) {
    case Sense::kLessEqual:
      lo_[j] = -kInf;
      hi_[j] = rhs;
      break;
    case Sense::kGreaterEqual:
      lo_[j] = rhs;
      hi_[j] = kInf;
      break;
    case Sense::kEqual:
      lo_[j] = rhs;
      hi_[j] = rhs;
      break;
  }
}

void Simplex::place_nonbasic(int j) {
  auto& s = state_[j];
  const bool lo_fin = std::isfinite(lo_[j]);
  const bool hi_fin = std::isfinite(hi_[j]);
  if (s == kAtUpper && !hi_fin) s = lo_fin ? kAtLower : kFree;
  if (s == kAtLower && !lo_fin) s = hi_fin ? kAtUpper : kFree;
  if (s == kFree && (lo_fin || hi_fin)) s = lo_fin ? kAtLower : kAtUpper;
  x_[j] = s == kAtLower ? lo_[j] : s == kAtUpper ? hi_[j] : 0.0;
}

void Simplex::slack_basis() {
  const int total = n_ + m_;
  x_.assign(total, 0.0);
  state_.assign(total, kAtLower);
  pos_.assign(total, -1);
  head_.assign(m_, 0);
  for (int j = 0; j < n_; ++j) {
    state_[j] = kAtLower;
    place_nonbasic(j);
  }
  for (int i = 0; i < m_; ++i) {
    const int j = n_ + i;
    state_[j] = kBasic;
    head_[i] = j;
    pos_[j] = i;
  }
  factor_valid_ = false;
  primal_valid_ = false;
}

void Simplex::reset_basis() { slack_basis(); }

Basis Simplex::basis() const { return {state_, n_, m_}; }

void Simplex::set_basis(const Basis& basis) {
  if (basis.num_variables != n_ || basis.num_rows != m_ ||
      static_cast<int>(basis.status.size()) != n_ + m_) {
    slack_basis();
    return;
  }
  int count = 0;
  for (auto s : basis.status) count += s == kBasic ? 1 : 0;
  if (count != m_) {
    slack_basis();
    return;
  }
  state_ = basis.status;
  pos_.assign(n_ + m_, -1);
  head_.assign(m_, 0);
  int k = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == kBasic) {
      head_[k] = j;
      pos_[j] = k++;
    } else {
      place_nonbasic(j);
    }
  }
  factor_valid_ = false;
  primal_valid_ = false;
  if (!refactor()) slack_basis();
}

void Simplex::set_bounds(int col, double lower, double upper) {
  if (col < 0 || col >= n_ || std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw InvalidArgument("simplex: bad bounds for column " + std::to_string(col));
  }
  lo_[col] = lower;
  hi_[col] = upper;
  if (state_[col] != kBasic) place_nonbasic(col);
  primal_valid_ = false;
}

void Simplex::set_rhs(int row, double rhs) {
  if (row < 0 || row >= m_ || !std::isfinite(rhs)) {
    throw InvalidArgument("simplex: bad rhs for row " + std::to_string(row));
  }
  const int j = n_ + row;
  set_logical_bounds(row, sense_[row], rhs);
  if (state_[j] != kBasic) place_nonbasic(j);
  primal_valid_ = false;
}

void Simplex::set_cost(int col, double c) {
  if (col < 0 || col >= n_ || !std::isfinite(c)) {
    throw InvalidArgument("simplex: bad cost for column " + std::to_string(col));
  }
  cost_[col] = c;
}

int Simplex::add_row(const std::vector<Term>& terms, Sense sense, double rhs) {
  const int r = m_;
  for (const auto& t : terms) {
    if (t.col < 0 || t.col >= n_ || !std::isfinite(t.coef)) {
      throw InvalidArgument("simplex: bad term in added row");
    }
    if (t.coef == 0.0) continue;
    auto& col = cols_[t.col];
    if (!col.empty() && col.back().row == r) {
      col.back().value += t.coef;
    } else {
      col.push_back({r, t.coef});
    }
  }
  ++m_;
  sense_.push_back(sense);
  lo_.push_back(0.0);
  hi_.push_back(0.0);
  cost_.push_back(0.0);
  const int j = n_ + r;
  x_.push_back(0.0);
  state_.push_back(kBasic);
  pos_.push_back(r);
  head_.push_back(j);
  set_logical_bounds(r, sense, rhs);
  factor_valid_ = false;
  primal_valid_ = false;
  return r;
}

double Simplex::column_dot(int j, const std::vector<double>& v) const {
  if (j >= n_) return -v[j - n_];
  double s = 0.0;
  for (const auto& e : cols_[j]) s += e.value * v[e.row];
  return s;
}

void Simplex::load_column(int j, std::vector<double>& v) const {
  v.assign(m_, 0.0);
  if (j >= n_) {
    v[j - n_] = -1.0;
    return;
  }
  for (const auto& e : cols_[j]) v[e.row] = e.value;
}

bool Simplex::refactor() {
  factor_->begin(m_);
  for (int k = 0; k < m_; ++k) {
    const int j = head_[k];
    if (j >= n_) {
      factor_->add(j - n_, k, -1.0);
    } else {
      for (const auto& e : cols_[j]) factor_->add(e.row, k, e.value);
    }
  }
  factor_valid_ = factor_->finish();
  primal_valid_ = false;
  return factor_valid_;
}

void Simplex::ensure_factor() {
  if (factor_valid_ && factor_->size() == m_) return;
  if (!refactor()) {
    slack_basis();
    if (!refactor()) throw SolverError("simplex: slack basis is singular");
  }
}

void Simplex::compute_primal() {
  // B x_B = -N x_N
  work_.assign(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == kBasic || x_[j] == 0.0) continue;
    if (j >= n_) {
      work_[j - n_] += x_[j];
    } else {
      for (const auto& e : cols_[j]) work_[e.row] -= e.value * x_[j];
    }
  }
  factor_->ftran(work_);
  for (int k = 0; k < m_; ++k) x_[head_[k]] = work_[k];
  primal_valid_ = true;
}

double Simplex::infeasibility(int j) const {
  const double x = x_[j];
  if (x < lo_[j]) return lo_[j] - x;
  if (x > hi_[j]) return x - hi_[j];
  return 0.0;
}

bool Simplex::primal_feasible() const {
  for (int k = 0; k < m_; ++k) {
    if (infeasibility(head_[k]) > opt_.primal_tolerance) return false;
  }
  return true;
}

void Simplex::compute_duals(bool phase1) {
  y_.assign(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const int j = head_[k];
    if (phase1) {
      if (x_[j] < lo_[j] - opt_.primal_tolerance) {
        y_[k] = -1.0;
      } else if (x_[j] > hi_[j] + opt_.primal_tolerance) {
        y_[k] = 1.0;
      }
    } else {
      y_[k] = cost_[j];
    }
  }
  factor_->btran(y_);
  d_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == kBasic) continue;
    d_[j] = (phase1 ? 0.0 : cost_[j]) - column_dot(j, y_);
  }
}

bool Simplex::pivot(int r, int q, const std::vector<double>& alpha) {
  const int p = head_[r];
  head_[r] = q;
  pos_[q] = r;
  pos_[p] = -1;
  state_[q] = kBasic;
  factor_->update(r, alpha);
  if (factor_->num_updates() >= opt_.refactor_period) {
    if (!refactor()) {
      slack_basis();
      ensure_factor();
    }
    compute_primal();
    return true;
  }
  return false;
}

Status Simplex::primal() {
  int degenerate = 0;
  int since_refresh = 0;
  for (;;) {
    if (++iterations_ > opt_.max_iterations) {
      throw SolverError("simplex: iteration limit reached");
    }
    if (!primal_valid_) compute_primal();
    if (++since_refresh > 50) {
      compute_primal();
      since_refresh = 0;
    }
    const bool phase1 = !primal_feasible();
    compute_duals(phase1);
    const bool bland = degenerate > opt_.degenerate_limit;

    int q = -1;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto s = state_[j];
      if (s == kBasic || lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      double score = 0.0;
      if (s == kAtLower && dj < -opt_.dual_tolerance) {
        score = -dj;
      } else if (s == kAtUpper && dj > opt_.dual_tolerance) {
        score = dj;
      } else if (s == kFree && std::abs(dj) > opt_.dual_tolerance) {
        score = std::abs(dj);
      } else {
        continue;
      }
      if (bland) {
        q = j;
        break;
      }
      if (score > best) {
        best = score;
        q = j;
      }
    }
    if (q < 0) {
      if (!phase1) return Status::kOptimal;
      // recheck on a fresh factorization before declaring infeasibility
      if (factor_->num_updates() > 0) {
        ensure_factor();
        if (!refactor()) ensure_factor();
        compute_primal();
        if (primal_feasible()) continue;
        compute_duals(true);
        bool any = false;
        for (int j = 0; j < n_ + m_ && !any; ++j) {
          if (state_[j] == kBasic || lo_[j] == hi_[j]) continue;
          const double dj = d_[j];
          any = (state_[j] == kAtLower && dj < -opt_.dual_tolerance) ||
                (state_[j] == kAtUpper && dj > opt_.dual_tolerance) ||
                (state_[j] == kFree && std::abs(dj) > opt_.dual_tolerance);
        }
        if (any) continue;
      }
      return Status::kInfeasible;
    }

    const double dir = d_[q] < 0 ? 1.0 : -1.0;
    load_column(q, alpha_);
    factor_->ftran(alpha_);

    // Harris two-pass ratio test
    const double tol = opt_.primal_tolerance;
    double t_relaxed = kInf;
    for (int k = 0; k < m_; ++k) {
      const double a = alpha_[k];
      if (std::abs(a) < opt_.pivot_tolerance) continue;
      const int i = head_[k];
      const double rate = -dir * a;
      const double xi = x_[i];
      double lim = kInf;
      if (phase1 && xi < lo_[i] - tol) {
        if (rate > 0) lim = (lo_[i] - xi + tol) / rate;
      } else if (phase1 && xi > hi_[i] + tol) {
        if (rate < 0) lim = (xi - hi_[i] + tol) / -rate;
      } else if (rate < 0) {
        if (std::isfinite(lo_[i])) lim = (xi - lo_[i] + tol) / -rate;
      } else {
        if (std::isfinite(hi_[i])) lim = (hi_[i] - xi + tol) / rate;
      }
      t_relaxed = std::min(t_relaxed, lim);
    }
    int r = -1;
    double t = kInf;
    bool to_lower = false;
    if (std::isfinite(t_relaxed)) {
      double best_pivot = -1.0;
      for (int k = 0; k < m_; ++k) {
        const double a = alpha_[k];
        if (std::abs(a) < opt_.pivot_tolerance) continue;
        const int i = head_[k];
        const double rate = -dir * a;
        const double xi = x_[i];
        double lim = kInf;
        bool lower = false;
        if (phase1 && xi < lo_[i] - tol) {
          if (rate > 0) {
            lim = (lo_[i] - xi) / rate;
            lower = true;
          }
        } else if (phase1 && xi > hi_[i] + tol) {
          if (rate < 0) lim = (xi - hi_[i]) / -rate;
        } else if (rate < 0) {
          if (std::isfinite(lo_[i])) {
            lim = (xi - lo_[i]) / -rate;
            lower = true;
          }
        } else {
          if (std::isfinite(hi_[i])) lim = (hi_[i] - xi) / rate;
        }
        if (lim > t_relaxed) continue;
        bool take;
        if (bland) {
          take = r < 0 || lim < t - 1e-12 || (lim <= t + 1e-12 && i < head_[r]);
        } else {
          take = std::abs(a) > best_pivot;
        }
        if (take) {
          best_pivot = std::abs(a);
          r = k;
          t = std::max(0.0, lim);
          to_lower = lower;
        }
      }
    }

    const double range = hi_[q] - lo_[q];
    if (std::isfinite(range) && range <= t) {
      // bound flip of the entering column
      x_[q] += dir * range;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * range * alpha_[k];
      state_[q] = state_[q] == kAtLower ? kAtUpper : kAtLower;
      x_[q] = state_[q] == kAtLower ? lo_[q] : hi_[q];
      degenerate = 0;
      continue;
    }
    if (r < 0) {
      if (phase1) {
        // cannot happen in exact arithmetic; refresh and retry
        refactor();
        ensure_factor();
        compute_primal();
        ++degenerate;
        continue;
      }
      return Status::kUnbounded;
    }
    degenerate = t < 1e-12 ? degenerate + 1 : 0;
    x_[q] += dir * t;
    for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * t * alpha_[k];
    const int p = head_[r];
    state_[p] = to_lower ? kAtLower : kAtUpper;
    x_[p] = to_lower ? lo_[p] : hi_[p];
    pivot(r, q, alpha_);
  }
}

bool Simplex::make_dual_feasible() {
  const double tol = opt_.dual_tolerance;
  bool flipped = false;
  for (int j = 0; j < n_ + m_; ++j) {
    const auto s = state_[j];
    if (s == kBasic || lo_[j] == hi_[j]) continue;
    const double dj = d_[j];
    if (s == kAtLower && dj < -tol) {
      if (!std::isfinite(hi_[j])) return false;
      state_[j] = kAtUpper;
      flipped = true;
    } else if (s == kAtUpper && dj > tol) {
      if (!std::isfinite(lo_[j])) return false;
      state_[j] = kAtLower;
      flipped = true;
    } else if (s == kFree && std::abs(dj) > tol) {
      return false;
    }
  }
  if (flipped) {
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] != kBasic) place_nonbasic(j);
    }
    compute_primal();
  }
  return true;
}

bool Simplex::dual(Status& status) {
  const double ptol = opt_.primal_tolerance;
  const double dtol = opt_.dual_tolerance;
  const int limit = 20 * (n_ + m_) + 100;
  int count = 0;
  for (;;) {
    if (++iterations_ > opt_.max_iterations || ++count > limit) return false;
    if (!primal_valid_) {
      compute_primal();
      compute_duals(false);
    }
    int r = -1;
    double worst = ptol;
    for (int k = 0; k < m_; ++k) {
      const double v = infeasibility(head_[k]);
      if (v > worst) {
        worst = v;
        r = k;
      }
    }
    if (r < 0) {
      status = Status::kOptimal;
      return true;
    }
    const int p = head_[r];
    const bool below = x_[p] < lo_[p];
    const double target = below ? lo_[p] : hi_[p];

    work_.assign(m_, 0.0);
    work_[r] = 1.0;
    factor_->btran(work_);
    row_alpha_.assign(n_ + m_, 0.0);
    double bound = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto s = state_[j];
      if (s == kBasic || lo_[j] == hi_[j]) continue;
      const double a = column_dot(j, work_);
      row_alpha_[j] = a;
      if (std::abs(a) < opt_.pivot_tolerance) continue;
      bool eligible;
      if (s == kFree) {
        eligible = true;
      } else if (below) {
        eligible = (s == kAtLower && a < 0) || (s == kAtUpper && a > 0);
      } else {
        eligible = (s == kAtLower && a > 0) || (s == kAtUpper && a < 0);
      }
      if (!eligible) continue;
      bound = std::min(bound, (std::abs(d_[j]) + dtol) / std::abs(a));
    }
    if (!std::isfinite(bound)) {
      status = Status::kInfeasible;
      return true;
    }
    int q = -1;
    double best_pivot = -1.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto s = state_[j];
      if (s == kBasic || lo_[j] == hi_[j]) continue;
      const double a = row_alpha_[j];
      if (std::abs(a) < opt_.pivot_tolerance) continue;
      bool eligible;
      if (s == kFree) {
        eligible = true;
      } else if (below) {
        eligible = (s == kAtLower && a < 0) || (s == kAtUpper && a > 0);
      } else {
        eligible = (s == kAtLower && a > 0) || (s == kAtUpper && a < 0);
      }
      if (!eligible) continue;
      if (std::abs(d_[j]) / std::abs(a) > bound) continue;
      if (std::abs(a) > best_pivot) {
        best_pivot = std::abs(a);
        q = j;
      }
    }
    load_column(q, alpha_);
    factor_->ftran(alpha_);
    const double arq = alpha_[r];
    if (std::abs(arq - row_alpha_[q]) > 1e-7 * (1.0 + std::abs(arq)) ||
        std::abs(arq) < opt_.pivot_tolerance) {
      if (factor_->num_updates() == 0) return false;
      if (!refactor()) return false;
      compute_primal();
      compute_duals(false);
      continue;
    }
    const double dx = (x_[p] - target) / arq;
    x_[q] += dx;
    for (int k = 0; k < m_; ++k) x_[head_[k]] -= dx * alpha_[k];
    x_[p] = target;
    const double theta = d_[q] / row_alpha_[q];
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] != kBasic && row_alpha_[j] != 0.0) d_[j] -= theta * row_alpha_[j];
    }
    d_[p] = -theta;
    d_[q] = 0.0;
    state_[p] = below ? kAtLower : kAtUpper;
    if (pivot(r, q, alpha_)) compute_duals(false);
  }
}

LpSolution Simplex::extract(Status status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  if (status != Status::kOptimal) return sol;
  compute_primal();
  compute_duals(false);
  sol.x.assign(x_.begin(), x_.begin() + n_);
  // snap nonbasic values exactly onto their bounds
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == kAtLower) sol.x[j] = lo_[j];
    if (state_[j] == kAtUpper) sol.x[j] = hi_[j];
  }
  double obj = offset_;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * sol.x[j];
  sol.objective = obj;
  sol.duals.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) sol.duals[i] = state_[n_ + i] == kBasic ? 0.0 : d_[n_ + i];
  sol.reduced_costs.assign(n_, 0.0);
  for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = state_[j] == kBasic ? 0.0 : d_[j];
  return sol;
}

LpSolution Simplex::solve() {
  iterations_ = 0;
  ensure_factor();
  compute_primal();
  if (!primal_feasible()) {
    compute_duals(false);
    if (make_dual_feasible()) {
      Status ignored = Status::kOptimal;
      dual(ignored);
    }
  }
  // the primal pass certifies the dual result, or takes over when the dual gave up or reported
  // infeasibility
  const Status status = primal();
  total_iterations_ += iterations_;
  return extract(status);
}

LpSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  Simplex simplex(lp, options);
  return simplex.solve();
}

}  // namespace mgems::lp
