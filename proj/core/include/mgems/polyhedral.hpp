#pragma once

#include <array>
#include <vector>

namespace mgems {

using Vec4 = std::array<double, 4>;

struct Cut {
  Vec4 lambda{};
  double beta = 0.0;
};

/// max_j <lambda_j, x> + beta_j; a lower approximation of a convex value function.
class PolyhedralFunction {
 public:
  PolyhedralFunction() = default;
  explicit PolyhedralFunction(std::vector<Cut> cuts);

  /// Throws InvalidArgument on non-finite coefficients.
  void add_cut(const Vec4& lambda, double beta);
  void add_cut(const Cut& cut) { add_cut(cut.lambda, cut.beta); }

  /// Throws InvalidArgument when there is no cut.
  double evaluate(const Vec4& x) const;
  /// Like evaluate, but an empty function is -infinity.
  double evaluate_or_lowest(const Vec4& x) const;
  /// Index of a maximizing cut (lowest index on ties); -1 when empty.
  int active_cut(const Vec4& x) const;

  bool empty() const { return cuts_.empty(); }
  int size() const { return static_cast<int>(cuts_.size()); }
  const std::vector<Cut>& cuts() const { return cuts_; }
  const Cut& cut(int i) const { return cuts_.at(i); }

 private:
  std::vector<Cut> cuts_;
};

inline double cut_value(const Cut& c, const Vec4& x) {
  return c.lambda[0] * x[0] + c.lambda[1] * x[1] + c.lambda[2] * x[2] + c.lambda[3] * x[3] +
         c.beta;
}

}  // namespace mgems
