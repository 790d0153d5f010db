// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "chunkstore/error.hpp"

namespace chunkstore {

inline constexpr std::size_t kWriterIdLength = 6;
inline constexpr std::uint32_t kMaxLogicalCounter = 999'999;
inline constexpr std::int64_t kMaxPhysicalMillis = 9'999'999'999'999'999;

/// Globally ordered, per-writer-monotonic version stamp: hybrid physical
/// timestamp plus logical counter plus fixed-width writer id.
///
/// The text form is "pppppppppppppppp-cccccc-wwwwww" (16-digit zero-padded
/// milliseconds, 6-digit counter, 6-char writer id). Bytewise order of the
/// text equals the (millis, counter, writer) tuple order, which is what the
/// sort-key layout relies on.
struct EntityVersion {
  std::int64_t physical_millis = 0;
  std::uint32_t logical_counter = 0;
  std::string writer_id;  // exactly kWriterIdLength chars

  static constexpr std::size_t kTextLength = 16 + 1 + 6 + 1 + kWriterIdLength;

  friend auto operator<=>(const EntityVersion& a, const EntityVersion& b) {
    if (auto c = a.physical_millis <=> b.physical_millis; c != 0) return c;
    if (auto c = a.logical_counter <=> b.logical_counter; c != 0) return c;
    return a.writer_id.compare(b.writer_id) <=> 0;
  }
  friend bool operator==(const EntityVersion& a,
                         const EntityVersion& b) = default;

  std::string text() const {
    char buf[kTextLength + 1];
    std::snprintf(buf, sizeof buf, "%016lld-%06u-%.6s",
                  static_cast<long long>(physical_millis), logical_counter,
                  writer_id.c_str());
    return std::string(buf, kTextLength);
  }

  static std::optional<EntityVersion> parse(std::string_view s) {
    if (s.size() != kTextLength || s[16] != '-' || s[23] != '-')
      return std::nullopt;
    std::int64_t millis = 0;
    for (int i = 0; i < 16; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      millis = millis * 10 + (s[i] - '0');
    }
    std::uint32_t counter = 0;
    for (int i = 17; i < 23; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      counter = counter * 10 + static_cast<std::uint32_t>(s[i] - '0');
    }
    EntityVersion v;
    v.physical_millis = millis;
    v.logical_counter = counter;
    v.writer_id = std::string(s.substr(24, kWriterIdLength));
    return v;
  }
};

inline void validate_writer_id(std::string_view writer_id) {
  if (writer_id.size() != kWriterIdLength)
    raise(Errc::invalid_argument, "writer_id must be exactly 6 characters");
}

/// Issues the next version for `writer_id` given the current clock reading.
///
/// If the clock has not advanced past the previously issued version, its
/// millisecond is reused and the logical counter incremented, so successive
/// versions from one writer are strictly increasing even under clock stall
/// or regression.
inline EntityVersion generate_version(
    std::int64_t clock_millis, std::string_view writer_id,
    const std::optional<EntityVersion>& last_issued = std::nullopt) {
  validate_writer_id(writer_id);
  if (clock_millis < 0 || clock_millis > kMaxPhysicalMillis)
    raise(Errc::invalid_argument, "clock reading out of range");
  EntityVersion v;
  v.writer_id = std::string(writer_id);
  if (last_issued && clock_millis <= last_issued->physical_millis) {
    if (last_issued->logical_counter >= kMaxLogicalCounter)
      raise(Errc::counter_exhausted,
            "logical counter exhausted within one millisecond");
    v.physical_millis = last_issued->physical_millis;
    v.logical_counter = last_issued->logical_counter + 1;
  } else {
    v.physical_millis = clock_millis;
    v.logical_counter = 0;
  }
  return v;
}

/// Stateful convenience wrapper around generate_version.
class VersionGenerator {
 public:
  VersionGenerator(std::function<std::int64_t()> clock, std::string writer_id)
      : clock_(std::move(clock)), writer_id_(std::move(writer_id)) {
    validate_writer_id(writer_id_);
  }

  EntityVersion next() {
    EntityVersion v = generate_version(clock_(), writer_id_, last_);
    last_ = v;
    return v;
  }

  const std::optional<EntityVersion>& last_issued() const { return last_; }

 private:
  std::function<std::int64_t()> clock_;
  std::string writer_id_;
  std::optional<EntityVersion> last_;
};

}  // namespace chunkstore
