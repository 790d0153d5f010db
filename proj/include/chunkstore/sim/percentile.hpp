// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "chunkstore/error.hpp"

namespace chunkstore::sim {

/// Nearest-rank quantile over an already-sorted ascending sample set:
/// the ceil(q*N)-th smallest value, 1-based.
inline double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) raise(Errc::empty_samples, "percentile of no samples");
  if (!(q > 0.0 && q < 1.0))
    raise(Errc::invalid_argument, "quantile must lie in (0, 1)");
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  if (rank < 1) rank = 1;
  if (rank > sorted.size()) rank = sorted.size();
  return sorted[rank - 1];
}

inline double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) raise(Errc::empty_samples, "percentile of no samples");
  std::sort(samples.begin(), samples.end());
  return percentile_sorted(samples, q);
}

}  // namespace chunkstore::sim
