#include "basis_factor.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

namespace mgems::lp::detail {

struct BasisFactor::Impl {
  bool dense = true;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense_lu;
  Eigen::SparseMatrix<double> sparse_matrix;
  // SparseLU is neither copyable nor movable; recreate it on copy.
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>
      sparse_lu;
  mutable Eigen::VectorXd work;
};

BasisFactor::BasisFactor() : impl_(std::make_unique<Impl>()) {}
BasisFactor::~BasisFactor() = default;

BasisFactor::BasisFactor(const BasisFactor& other) : impl_(std::make_unique<Impl>()) {
  *this = other;
}

BasisFactor& BasisFactor::operator=(const BasisFactor& other) {
  if (this == &other) return *this;
  m_ = other.m_;
  eta_row_ = other.eta_row_;
  eta_pivot_ = other.eta_pivot_;
  eta_start_ = other.eta_start_;
  eta_index_ = other.eta_index_;
  eta_value_ = other.eta_value_;
  impl_->dense = other.impl_->dense;
  impl_->triplets = other.impl_->triplets;
  impl_->dense_lu = other.impl_->dense_lu;
  impl_->sparse_matrix = other.impl_->sparse_matrix;
  impl_->sparse_lu.reset();
  if (other.impl_->sparse_lu) {
    impl_->sparse_lu = std::make_unique<
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
    impl_->sparse_lu->compute(impl_->sparse_matrix);
  }
  return *this;
}

void BasisFactor::begin(int m) {
  m_ = m;
  impl_->triplets.clear();
  eta_row_.clear();
  eta_pivot_.clear();
  eta_start_.clear();
  eta_index_.clear();
  eta_value_.clear();
}

void BasisFactor::add(int row, int col, double value) {
  impl_->triplets.emplace_back(row, col, value);
}

bool BasisFactor::finish() {
  auto& im = *impl_;
  im.dense = m_ <= kDenseLimit;
  if (m_ == 0) return true;
  if (im.dense) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (const auto& t : im.triplets) b(t.row(), t.col()) += t.value();
    const double scale = b.cwiseAbs().maxCoeff();
    im.dense_lu.compute(b);
    const auto& lu = im.dense_lu.matrixLU();
    double min_pivot = std::abs(lu(0, 0));
    for (int i = 1; i < m_; ++i) min_pivot = std::min(min_pivot, std::abs(lu(i, i)));
    return min_pivot > 1e-11 * std::max(1.0, scale);
  }
  im.sparse_matrix.resize(m_, m_);
  im.sparse_matrix.setFromTriplets(im.triplets.begin(), im.triplets.end());
  im.sparse_matrix.makeCompressed();
  if (!im.sparse_lu) {
    im.sparse_lu = std::make_unique<
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
  }
  im.sparse_lu->compute(im.sparse_matrix);
  return im.sparse_lu->info() == Eigen::Success;
}

void BasisFactor::ftran(std::vector<double>& v) const {
  if (m_ == 0) return;
  auto& im = *impl_;
  Eigen::Map<Eigen::VectorXd> vec(v.data(), m_);
  if (im.dense) {
    im.work = im.dense_lu.solve(vec);
  } else {
    im.work = im.sparse_lu->solve(vec);
  }
  vec = im.work;
  for (std::size_t k = 0; k < eta_row_.size(); ++k) {
    const int r = eta_row_[k];
    const double xr = v[r] / eta_pivot_[k];
    v[r] = xr;
    if (xr == 0.0) continue;
    for (int p = eta_start_[k]; p < eta_start_[k + 1]; ++p) v[eta_index_[p]] -= eta_value_[p] * xr;
  }
}

void BasisFactor::btran(std::vector<double>& v) const {
  if (m_ == 0) return;
  for (std::size_t kk = eta_row_.size(); kk-- > 0;) {
    const int r = eta_row_[kk];
    double s = v[r];
    for (int p = eta_start_[kk]; p < eta_start_[kk + 1]; ++p) s -= eta_value_[p] * v[eta_index_[p]];
    v[r] = s / eta_pivot_[kk];
  }
  auto& im = *impl_;
  Eigen::Map<Eigen::VectorXd> vec(v.data(), m_);
  if (im.dense) {
    im.work = im.dense_lu.transpose().solve(vec);
  } else {
    im.work = im.sparse_lu->transpose().solve(vec);
  }
  vec = im.work;
}

void BasisFactor::update(int r, const std::vector<double>& alpha) {
  if (eta_start_.empty()) eta_start_.push_back(0);
  eta_row_.push_back(r);
  eta_pivot_.push_back(alpha[r]);
  for (int i = 0; i < m_; ++i) {
    if (i != r && alpha[i] != 0.0) {
      eta_index_.push_back(i);
      eta_value_.push_back(alpha[i]);
    }
  }
  eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

}  // namespace mgems::lp::detail
