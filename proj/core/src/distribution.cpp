#include "mgems/distribution.hpp"

#include <cmath>

#include "mgems/error.hpp"

namespace mgems {

void DiscreteDistribution::validate() const {
  if (atoms.empty()) throw InvalidArgument("distribution needs at least one atom");
  if (atoms.size() != weights.size()) throw InvalidArgument("atoms and weights differ in size");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("negative or non-finite weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("weights do not sum to 1");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.d_el_net) || !std::isfinite(a.d_th)) {
      throw InvalidArgument("non-finite atom");
    }
  }
}

Uncertainty DiscreteDistribution::mean() const {
  Uncertainty m;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    m.d_el_net += weights[i] * atoms[i].d_el_net;
    m.d_th += weights[i] * atoms[i].d_th;
  }
  return m;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mgems
