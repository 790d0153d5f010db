// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chunkstore/version.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

namespace chunkstore {
namespace {

TEST(GenerateVersion, FirstIssueUsesClockDirectly) {
  const auto v = generate_version(1'700'000'000'000, "use1-a");
  EXPECT_EQ(v.physical_millis, 1'700'000'000'000);
  EXPECT_EQ(v.logical_counter, 0u);
  EXPECT_EQ(v.writer_id, "use1-a");
  EXPECT_EQ(v.text(), "0001700000000000-000000-use1-a");
}

TEST(GenerateVersion, SameMillisecondIncrementsCounter) {
  const auto first = generate_version(1'700'000'000'000, "use1-a");
  const auto second = generate_version(1'700'000'000'000, "use1-a", first);
  EXPECT_EQ(second.physical_millis, first.physical_millis);
  EXPECT_EQ(second.logical_counter, 1u);
  EXPECT_GT(second, first);
}

TEST(GenerateVersion, ClockRegressionStillMonotonic) {
  const auto first = generate_version(1'700'000'000'500, "use1-a");
  const auto second = generate_version(1'700'000'000'100, "use1-a", first);
  EXPECT_EQ(second.physical_millis, 1'700'000'000'500);
  EXPECT_EQ(second.logical_counter, 1u);
  EXPECT_GT(second, first);
}

TEST(GenerateVersion, CounterExhaustion) {
  EntityVersion last{1'700'000'000'000, kMaxLogicalCounter, "use1-a"};
  try {
    generate_version(1'700'000'000'000, "use1-a", last);
    FAIL() << "expected CounterExhausted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::counter_exhausted);
  }
  // a clock advance resets the counter
  const auto next = generate_version(1'700'000'000'001, "use1-a", last);
  EXPECT_EQ(next.logical_counter, 0u);
  EXPECT_GT(next, last);
}

TEST(GenerateVersion, ValidatesInput) {
  EXPECT_THROW(generate_version(1, "short"), Error);
  EXPECT_THROW(generate_version(1, "toolong7"), Error);
  EXPECT_THROW(generate_version(-5, "use1-a"), Error);
}

TEST(EntityVersion, WriterIdBreaksTies) {
  EntityVersion a{1'700'000'000'000, 5, "use1-a"};
  EntityVersion b{1'700'000'000'000, 5, "usw2-b"};
  EXPECT_LT(a, b);
  EXPECT_LT(a.text(), b.text());
}

// Total order never ties for distinct writers, and the sortable text form
// orders exactly like the tuple, across sampled triples.
TEST(EntityVersion, TextOrderMatchesTupleOrder) {
  std::mt19937_64 rng(43);
  const char* writers[] = {"use1-a", "use1-b", "usw2-a"};
  std::vector<EntityVersion> versions;
  for (int i = 0; i < 500; ++i) {
    versions.push_back(EntityVersion{
        static_cast<std::int64_t>(rng() % 3'000'000'000'000),
        static_cast<std::uint32_t>(rng() % 1'000'000), writers[rng() % 3]});
  }
  for (const auto& a : versions) {
    for (const auto& b : versions) {
      const bool tuple_lt = a < b;
      const bool text_lt = a.text() < b.text();
      EXPECT_EQ(tuple_lt, text_lt);
      if (a.writer_id != b.writer_id)
        EXPECT_TRUE(a < b || b < a) << "distinct writers must never tie";
    }
  }
}

TEST(EntityVersion, ParseInvertsText) {
  EntityVersion v{1'712'345'678'901, 42, "eu-c-1"};
  auto parsed = EntityVersion::parse(v.text());
  ASSERT_TRUE(parsed.has_value());
  EXPECT_EQ(*parsed, v);
  EXPECT_FALSE(EntityVersion::parse("not-a-version").has_value());
  EXPECT_FALSE(
      EntityVersion::parse("00017000000000x0-000000-use1-a").has_value());
}

TEST(VersionGenerator, StrictlyIncreasingUnderStalledClock) {
  std::int64_t now = 1'700'000'000'000;
  VersionGenerator gen([&now] { return now; }, "use1-a");
  EntityVersion prev = gen.next();
  for (int i = 0; i < 1000; ++i) {
    if (i % 3 == 0) now += (i % 2);  // stall most of the time
    EntityVersion v = gen.next();
    EXPECT_GT(v, prev);
    prev = v;
  }
}

}  // namespace
}  // namespace chunkstore
