#pragma once

#include <cstdint>
#include <vector>

#include "mgems/physical_model.hpp"

namespace mgems {

/// Finite-support law of one step's uncertainty.
struct DiscreteDistribution {
  std::vector<Uncertainty> atoms;
  std::vector<double> weights;

  /// Throws InvalidArgument unless weights are >= 0, sum to 1 within 1e-9 and there is an atom.
  void validate() const;
  int size() const { return static_cast<int>(atoms.size()); }
  Uncertainty mean() const;

  static DiscreteDistribution single(const Uncertainty& w) { return {{w}, {1.0}}; }
};

/// Independent seed for stream `stream` derived from `base` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace mgems
