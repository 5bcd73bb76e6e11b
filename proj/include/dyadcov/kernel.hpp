#pragma once

#include <algorithm>
#include <cstdlib>

#include "dyadcov/dataset.hpp"

namespace dyadcov {

/// Smallest rank gap between any endpoint of `a` and any endpoint of `b`.
/// Zero exactly when the dyads share a node.
inline int endpoint_distance(const Dyad& a, const Dyad& b) {
  return std::min({std::abs(a.i - b.i), std::abs(a.i - b.j),
                   std::abs(a.j - b.i), std::abs(a.j - b.j)});
}

/// Bartlett weight (1 - h/L)_+ for a non-negative lag h and bandwidth L >= 1.
inline double bartlett_weight(int h, int L) {
  if (h < 0) h = -h;
  if (h >= L) return 0.0;
  return 1.0 - static_cast<double>(h) / static_cast<double>(L);
}

}  // namespace dyadcov
