// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "chunkstore/error.hpp"
#include "chunkstore/rng.hpp"
#include "chunkstore/sim/lag_model.hpp"
#include "chunkstore/sim/percentile.hpp"

namespace chunkstore::sim {

struct QuantileTargets {
  double p50 = 0;
  double p95 = 0;
  double p99 = 0;

  void validate() const {
    if (!(0 < p50 && p50 < p95 && p95 < p99))
      raise(Errc::invalid_argument,
            "targets must satisfy 0 < p50 < p95 < p99");
  }
};

/// Empirical (p50, p95, p99) of `draws` seeded samples from the model.
inline QuantileTargets empirical_quantiles(const LagModel& model,
                                           std::size_t draws,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> samples(draws);
  for (double& s : samples) s = sample_lag(model, rng);
  std::sort(samples.begin(), samples.end());
  return QuantileTargets{percentile_sorted(samples, 0.50),
                         percentile_sorted(samples, 0.95),
                         percentile_sorted(samples, 0.99)};
}

namespace detail {

inline constexpr std::uint64_t kCalibrationSeed = 0x5eed0c0a11b7a7edull;
inline constexpr std::size_t kSearchDraws = 200'000;
inline constexpr std::size_t kVerifyDraws = 1'000'000;
inline constexpr double kTolerance = 0.10;

inline bool within_tolerance(const QuantileTargets& got,
                             const QuantileTargets& want, double tol) {
  auto ok = [tol](double g, double w) { return std::abs(g / w - 1.0) <= tol; };
  return ok(got.p50, want.p50) && ok(got.p95, want.p95) && ok(got.p99, want.p99);
}

}  // namespace detail

/// Finds lognormal-mixture parameters whose sampled quantiles hit the three
/// targets within 10% relative error (verified over one million seeded
/// draws).
///
/// A single lognormal pins the p95/p50 and p99/p50 log-ratios to fixed
/// multiples of sigma, so it cannot satisfy an arbitrarily heavy p99;
/// those targets need the spike component. The search is a fixed-point
/// iteration against a Monte-Carlo quantile oracle: the base median drives
/// p50, the base sigma drives p95, and the spike location drives p99.
inline LagModel calibrate_lag_model(double p50_target, double p95_target,
                                    double p99_target) {
  const QuantileTargets want{p50_target, p95_target, p99_target};
  want.validate();

  // A plain lognormal first: matches "tail-light" targets with the simplest
  // model (spike probability zero).
  {
    const double s95 = (std::log(p95_target) - std::log(p50_target)) / 1.6449;
    const double s99 = (std::log(p99_target) - std::log(p50_target)) / 2.3263;
    for (double sigma : {s99, (s95 + s99) / 2, s95}) {
      LagModel candidate = LagModel::lognormal_mixture(
          std::log(p50_target), sigma, 0.0, std::log(p99_target), 0.0);
      const auto got = empirical_quantiles(candidate, detail::kSearchDraws,
                                           detail::kCalibrationSeed);
      if (detail::within_tolerance(got, want, detail::kTolerance * 0.5))
        return candidate;
    }
  }

  // Mixture with a 2% spike: the top percentile comes from the spike, so
  // the mixture p99 sits near the spike median.
  double mu_b = std::log(p50_target);
  double s_b =
      std::max(1e-4, (std::log(p95_target) - std::log(p50_target)) / 1.873);
  double mu_s = std::log(p99_target);
  const double s_s = 0.25;
  const double p_spike = 0.02;

  LagModel model;
  for (int iter = 0; iter < 24; ++iter) {
    model = LagModel::lognormal_mixture(mu_b, s_b, p_spike, mu_s, s_s);
    const auto got = empirical_quantiles(model, detail::kSearchDraws,
                                         detail::kCalibrationSeed + iter);
    if (detail::within_tolerance(got, want, detail::kTolerance * 0.3)) break;
    mu_b += std::log(want.p50 / got.p50);
    const double got_gap = std::log(got.p95) - std::log(got.p50);
    const double want_gap = std::log(want.p95) - std::log(want.p50);
    if (got_gap > 1e-9)
      s_b = std::clamp(s_b * want_gap / got_gap, 1e-4, 5.0);
    mu_s += std::log(want.p99 / got.p99);
  }

  const auto verified = empirical_quantiles(model, detail::kVerifyDraws,
                                            detail::kCalibrationSeed ^ 0xabcd);
  if (!detail::within_tolerance(verified, want, detail::kTolerance))
    raise(Errc::calibration_failed,
          "no mixture parameters found within 10% of targets");
  return model;
}

}  // namespace chunkstore::sim
