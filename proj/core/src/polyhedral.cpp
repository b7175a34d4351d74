#include "mgems/polyhedral.hpp"

#include <cmath>
#include <limits>

#include "mgems/error.hpp"

namespace mgems {

PolyhedralFunction::PolyhedralFunction(std::vector<Cut> cuts) {
  for (const auto& c : cuts) add_cut(c);
}

void PolyhedralFunction::add_cut(const Vec4& lambda, double beta) {
  for (double v : lambda) {
    if (!std::isfinite(v)) throw InvalidArgument("cut slope is not finite");
  }
  if (!std::isfinite(beta)) throw InvalidArgument("cut intercept is not finite");
  cuts_.push_back({lambda, beta});
}

double PolyhedralFunction::evaluate(const Vec4& x) const {
  if (cuts_.empty()) throw InvalidArgument("evaluate on a polyhedral function without cuts");
  return evaluate_or_lowest(x);
}

double PolyhedralFunction::evaluate_or_lowest(const Vec4& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cuts_) best = std::max(best, cut_value(c, x));
  return best;
}

int PolyhedralFunction::active_cut(const Vec4& x) const {
  int arg = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    const double v = cut_value(cuts_[i], x);
    if (arg < 0 || v > best) {
      best = v;
      arg = i;
    }
  }
  return arg;
}

}  // namespace mgems
