// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chunkstore/sim/calibrate.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace chunkstore::sim {
namespace {

void expect_within(const LagModel& model, double p50, double p95, double p99,
                   double tol) {
  const auto got = empirical_quantiles(model, 1'000'000, 0x42);
  EXPECT_NEAR(got.p50 / p50, 1.0, tol) << "p50 " << got.p50;
  EXPECT_NEAR(got.p95 / p95, 1.0, tol) << "p95 " << got.p95;
  EXPECT_NEAR(got.p99 / p99, 1.0, tol) << "p99 " << got.p99;
}

TEST(Calibrate, HitsFastSeriesTargets) {
  const LagModel model = calibrate_lag_model(0.4, 0.9, 1.8);
  expect_within(model, 0.4, 0.9, 1.8, 0.10);
}

TEST(Calibrate, HitsHeavyTailSeriesTargets) {
  const LagModel model = calibrate_lag_model(1.2, 4.5, 28.5);
  expect_within(model, 1.2, 4.5, 28.5, 0.10);
  // the heavy p99/p95 ratio genuinely needs the spike component
  EXPECT_EQ(model.kind, LagModel::Kind::lognormal_mixture);
  EXPECT_GT(model.spike_probability, 0.0);
}

TEST(Calibrate, NearEqualTargetsYieldNearConstantModel) {
  const LagModel model = calibrate_lag_model(1.0, 1.01, 1.02);
  expect_within(model, 1.0, 1.01, 1.02, 0.10);
  EXPECT_EQ(model.spike_probability, 0.0);  // plain lognormal suffices
  EXPECT_LT(model.base_sigma, 0.02);        // near-constant
}

TEST(Calibrate, RejectsNonMonotoneTargets) {
  try {
    calibrate_lag_model(5.0, 4.0, 3.0);
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
  }
  EXPECT_THROW(calibrate_lag_model(0.0, 1.0, 2.0), Error);
  EXPECT_THROW(calibrate_lag_model(1.0, 1.0, 2.0), Error);
}

TEST(Calibrate, IsDeterministic) {
  const LagModel a = calibrate_lag_model(0.4, 0.9, 1.8);
  const LagModel b = calibrate_lag_model(0.4, 0.9, 1.8);
  EXPECT_EQ(a.base_mu, b.base_mu);
  EXPECT_EQ(a.base_sigma, b.base_sigma);
  EXPECT_EQ(a.spike_probability, b.spike_probability);
  EXPECT_EQ(a.spike_mu, b.spike_mu);
  EXPECT_EQ(a.spike_sigma, b.spike_sigma);
}

}  // namespace
}  // namespace chunkstore::sim
