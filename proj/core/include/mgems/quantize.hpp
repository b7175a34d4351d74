#pragma once

#include <cstdint>
#include <vector>

#include "mgems/distribution.hpp"
#include "mgems/scenarios.hpp"

namespace mgems {

struct QuantizationResult {
  std::vector<std::vector<double>> centroids;
  std::vector<double> weights;
  /// Mean squared distance to the assigned centroid, once after seeding and after each update.
  std::vector<double> distortion;
  int iterations = 0;
  int requested = 0;
  /// True when fewer distinct points than requested atoms forced a smaller support.
  bool reduced = false;
};

/// Lloyd-Max (k-means) quantization of points in R^d into at most s atoms. Seeding is
/// k-means++ driven by `seed`; iterations stop at an assignment fixpoint or after
/// max_iterations. Atoms that end with no point are dropped.
QuantizationResult lloyd_max(const std::vector<std::vector<double>>& points, int s,
                             std::uint64_t seed, int max_iterations = 100);

/// Joint (d_el_net, d_th) quantization of every step column: entry t is the law of values[t].
std::vector<DiscreteDistribution> quantize_steps(const ScenarioSet& scenarios, int s,
                                                 std::uint64_t seed);

}  // namespace mgems
