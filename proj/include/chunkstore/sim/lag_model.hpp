// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "chunkstore/error.hpp"
#include "chunkstore/rng.hpp"

namespace chunkstore::sim {

/// Replication-delay distribution for one channel. `constant` is the
/// degenerate model; `lognormal_mixture` draws from a base lognormal most of
/// the time and from a heavy "spike" lognormal with spike_probability,
/// capturing congestion tails. An optional cap clamps every sample.
struct LagModel {
  enum class Kind { constant, lognormal_mixture };

  Kind kind = Kind::constant;
  double constant_seconds = 0.0;
  // log-space parameters, lognormal_mixture only
  double base_mu = 0.0;
  double base_sigma = 0.0;
  double spike_probability = 0.0;
  double spike_mu = 0.0;
  double spike_sigma = 0.0;
  std::optional<double> cap_seconds;

  static LagModel constant(double seconds,
                           std::optional<double> cap = std::nullopt) {
    LagModel m;
    m.kind = Kind::constant;
    m.constant_seconds = seconds;
    m.cap_seconds = cap;
    return m;
  }

  static LagModel lognormal_mixture(double base_mu, double base_sigma,
                                    double spike_probability, double spike_mu,
                                    double spike_sigma,
                                    std::optional<double> cap = std::nullopt) {
    LagModel m;
    m.kind = Kind::lognormal_mixture;
    m.base_mu = base_mu;
    m.base_sigma = base_sigma;
    m.spike_probability = spike_probability;
    m.spike_mu = spike_mu;
    m.spike_sigma = spike_sigma;
    m.cap_seconds = cap;
    return m;
  }

  void validate() const {
    if (kind == Kind::constant) {
      if (constant_seconds < 0)
        raise(Errc::config_error, "constant lag must be non-negative");
    } else {
      if (base_sigma < 0 || spike_sigma < 0)
        raise(Errc::config_error, "lag sigma must be non-negative");
      if (spike_probability < 0 || spike_probability > 1)
        raise(Errc::config_error, "spike_probability must be in [0, 1]");
    }
    if (cap_seconds && *cap_seconds < 0)
      raise(Errc::config_error, "cap_seconds must be non-negative");
  }
};

/// One delay draw in seconds; a pure function of (model, rng state). The
/// mixture consumes one uniform (branch select) and one normal (two
/// uniforms) per draw regardless of branch.
inline double sample_lag(const LagModel& model, Rng& rng) {
  double lag;
  if (model.kind == LagModel::Kind::constant) {
    lag = model.constant_seconds;
  } else {
    const bool spike = rng.uniform01() < model.spike_probability;
    const double z = rng.normal();
    lag = spike ? std::exp(model.spike_mu + model.spike_sigma * z)
                : std::exp(model.base_mu + model.base_sigma * z);
  }
  if (lag < 0) lag = 0;
  if (model.cap_seconds && lag > *model.cap_seconds) lag = *model.cap_seconds;
  return lag;
}

}  // namespace chunkstore::sim
