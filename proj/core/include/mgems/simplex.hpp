#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mgems/lp.hpp"

namespace mgems::lp {

namespace detail {
class BasisFactor;
}

struct SimplexOptions {
  int max_iterations = 200000;
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_period = 100;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 50;
};

/// Opaque simplex basis; valid for any solver with the same column and row counts.
struct Basis {
  std::vector<std::int8_t> status;
  int num_variables = 0;
  int num_rows = 0;
};

/// Bounded-variable revised simplex over  min c.x  s.t.  row_lo <= A x <= row_hi, lo <= x <= hi.
/// Each row i carries a logical r_i = a_i.x with bounds given by its sense and rhs; row duals are
/// therefore d(objective)/d(rhs). Cold starts run a composite primal phase 1; after bound, rhs or
/// row changes the previous basis stays dual feasible and the dual simplex re-optimizes.
/// Deterministic: Dantzig pricing with lowest-index ties, Bland's rule after degenerate stalls.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp, SimplexOptions options = {});
  ~Simplex();
  Simplex(const Simplex& other);
  Simplex& operator=(const Simplex& other);
  Simplex(Simplex&&) noexcept;
  Simplex& operator=(Simplex&&) noexcept;

  LpSolution solve();

  void set_bounds(int col, double lower, double upper);
  void set_rhs(int row, double rhs);
  void set_cost(int col, double cost);
  /// Appends a row; its logical enters the basis so the current basis stays dual feasible.
  int add_row(const std::vector<Term>& terms, Sense sense, double rhs);

  int num_variables() const { return n_; }
  int num_rows() const { return m_; }
  double lower(int col) const { return lo_.at(col); }
  double upper(int col) const { return hi_.at(col); }
  double cost(int col) const { return cost_.at(col); }

  Basis basis() const;
  /// Installs a basis; falls back to the slack basis when it does not fit or is singular.
  void set_basis(const Basis& basis);
  void reset_basis();

  /// Total simplex iterations performed by this instance.
  long long total_iterations() const { return total_iterations_; }

 private:
  enum State : std::int8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFree = 3 };

  void set_logical_bounds(int row, Sense sense, double rhs);
  void place_nonbasic(int j);
  void slack_basis();
  bool refactor();
  void ensure_factor();
  void compute_primal();
  void compute_duals(bool phase1);
  double column_dot(int j, const std::vector<double>& v) const;
  void load_column(int j, std::vector<double>& v) const;
  double infeasibility(int i) const;
  bool primal_feasible() const;
  bool make_dual_feasible();
  /// Returns true when the pivot triggered a refactorization.
  bool pivot(int r, int q, const std::vector<double>& alpha);

  Status primal();
  /// Returns false when the dual simplex gave up and the primal should take over.
  bool dual(Status& status);
  LpSolution extract(Status status);

  SimplexOptions opt_;
  int n_ = 0;
  int m_ = 0;
  double offset_ = 0.0;
  struct Entry {
    int row;
    double value;
  };
  std::vector<std::vector<Entry>> cols_;
  std::vector<Sense> sense_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<double> x_;
  std::vector<std::int8_t> state_;
  std::vector<int> head_;
  std::vector<int> pos_;
  std::vector<double> y_, d_;
  std::unique_ptr<detail::BasisFactor> factor_;
  bool factor_valid_ = false;
  bool primal_valid_ = false;
  int iterations_ = 0;
  long long total_iterations_ = 0;

  std::vector<double> work_, alpha_, row_alpha_;
};

/// One-shot cold solve.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace mgems::lp
