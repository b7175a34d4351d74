#pragma once

#include <memory>
#include <vector>

namespace mgems::lp::detail {

/// LU factorization of a simplex basis with product-form (eta) updates.
/// Small bases use a dense partial-pivot LU, larger ones a sparse LU.
class BasisFactor {
 public:
  BasisFactor();
  ~BasisFactor();
  BasisFactor(const BasisFactor& other);
  BasisFactor& operator=(const BasisFactor& other);

  /// Starts a new factorization of an m x m matrix.
  void begin(int m);
  void add(int row, int col, double value);
  /// Returns false when the matrix is numerically singular.
  bool finish();

  /// Solves B v = rhs in place.
  void ftran(std::vector<double>& v) const;
  /// Solves B^T v = rhs in place.
  void btran(std::vector<double>& v) const;

  /// Replaces basis column `r` by a column whose ftran image is `alpha`.
  void update(int r, const std::vector<double>& alpha);

  int num_updates() const { return static_cast<int>(eta_row_.size()); }
  int size() const { return m_; }

  static constexpr int kDenseLimit = 120;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int m_ = 0;

  std::vector<int> eta_row_;
  std::vector<double> eta_pivot_;
  std::vector<int> eta_start_;
  std::vector<int> eta_index_;
  std::vector<double> eta_value_;
};

}  // namespace mgems::lp::detail
