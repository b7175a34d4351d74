#include "mgems/quantize.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "mgems/error.hpp"

namespace mgems {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

int distinct_count(std::vector<std::vector<double>> pts, int cap) {
  std::sort(pts.begin(), pts.end());
  int c = pts.empty() ? 0 : 1;
  for (std::size_t i = 1; i < pts.size() && c < cap; ++i) {
    if (pts[i] != pts[i - 1]) ++c;
  }
  return c;
}

// Returns the distortion; ties go to the lowest centroid index.
double assign(const std::vector<std::vector<double>>& pts,
              const std::vector<std::vector<double>>& cents, std::vector<int>& label) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t j = 0; j < cents.size(); ++j) {
      const double d = sq_dist(pts[i], cents[j]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    label[i] = arg;
    total += best;
  }
  return total / static_cast<double>(pts.size());
}

}  // namespace

QuantizationResult lloyd_max(const std::vector<std::vector<double>>& points, int s,
                             std::uint64_t seed, int max_iterations) {
  if (points.empty()) throw InvalidArgument("cannot quantize an empty sample");
  if (s < 1) throw InvalidArgument("number of atoms must be >= 1");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidArgument("points have mixed dimensions");
  }
  QuantizationResult res;
  res.requested = s;
  const int k = distinct_count(points, s);
  res.reduced = k < s;

  // k-means++ seeding over distinct points.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = points.size();
  std::vector<std::vector<double>> cents;
  cents.push_back(points[std::min<std::size_t>(n - 1, static_cast<std::size_t>(unif(rng) * n))]);
  std::vector<double> dmin(n);
  for (std::size_t i = 0; i < n; ++i) dmin[i] = sq_dist(points[i], cents[0]);
  while (static_cast<int>(cents.size()) < k) {
    double total = 0.0;
    for (double d : dmin) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      double r = unif(rng) * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (dmin[i] <= 0.0) continue;
        r -= dmin[i];
        pick = i;
        if (r <= 0.0) break;
      }
    }
    if (pick == n) break;
    cents.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) dmin[i] = std::min(dmin[i], sq_dist(points[i], cents.back()));
  }

  std::vector<int> label(n, 0);
  res.distortion.push_back(assign(points, cents, label));
  std::vector<int> count(cents.size());
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<std::vector<double>> sum(cents.size(), std::vector<double>(dim, 0.0));
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++count[label[i]];
      for (std::size_t q = 0; q < dim; ++q) sum[label[i]][q] += points[i][q];
    }
    for (std::size_t j = 0; j < cents.size(); ++j) {
      if (count[j] == 0) continue;
      for (std::size_t q = 0; q < dim; ++q) cents[j][q] = sum[j][q] / count[j];
    }
    const std::vector<int> old = label;
    res.distortion.push_back(assign(points, cents, label));
    res.iterations = it + 1;
    if (label == old) break;
  }

  std::fill(count.begin(), count.end(), 0);
  for (int l : label) ++count[l];
  for (std::size_t j = 0; j < cents.size(); ++j) {
    if (count[j] == 0) continue;
    res.centroids.push_back(cents[j]);
    res.weights.push_back(static_cast<double>(count[j]) / static_cast<double>(n));
  }
  return res;
}

std::vector<DiscreteDistribution> quantize_steps(const ScenarioSet& scenarios, int s,
                                                 std::uint64_t seed) {
  if (scenarios.size() < 1) throw InvalidArgument("cannot quantize an empty scenario set");
  const int T = scenarios.horizon();
  std::vector<DiscreteDistribution> out(T);
  std::vector<std::vector<double>> pts(scenarios.size(), std::vector<double>(2));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < scenarios.size(); ++i) {
      pts[i][0] = scenarios.values[i][t].d_el_net;
      pts[i][1] = scenarios.values[i][t].d_th;
    }
    const auto q = lloyd_max(pts, s, derive_seed(seed, static_cast<std::uint64_t>(t)));
    auto& dist = out[t];
    for (std::size_t j = 0; j < q.centroids.size(); ++j) {
      dist.atoms.push_back({q.centroids[j][0], std::max(0.0, q.centroids[j][1])});
      dist.weights.push_back(q.weights[j]);
    }
  }
  return out;
}

}  // namespace mgems
