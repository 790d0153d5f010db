// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chunkstore {

/// Failure classes surfaced by the store, codec, protocol and simulator.
enum class Errc {
  // kv store
  item_too_large,
  batch_limit_exceeded,
  condition_failed,
  object_not_found,
  // codec
  index_out_of_range,
  chunk_count_mismatch,
  size_mismatch,
  digest_mismatch,
  non_contiguous_indices,
  // protocol
  counter_exhausted,
  entity_too_large,
  config_error,
  entity_not_found,
  entity_corrupt,
  // baseline
  dangling_pointer,
  // simulator
  missing_version_attribute,
  empty_samples,
  calibration_failed,
  // misc
  invalid_argument,
};

inline constexpr std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::item_too_large: return "ItemTooLarge";
    case Errc::batch_limit_exceeded: return "BatchLimitExceeded";
    case Errc::condition_failed: return "ConditionFailed";
    case Errc::object_not_found: return "ObjectNotFound";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::chunk_count_mismatch: return "ChunkCountMismatch";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::digest_mismatch: return "DigestMismatch";
    case Errc::non_contiguous_indices: return "NonContiguousIndices";
    case Errc::counter_exhausted: return "CounterExhausted";
    case Errc::entity_too_large: return "EntityTooLarge";
    case Errc::config_error: return "ConfigError";
    case Errc::entity_not_found: return "EntityNotFound";
    case Errc::entity_corrupt: return "EntityCorrupt";
    case Errc::dangling_pointer: return "DanglingPointer";
    case Errc::missing_version_attribute: return "MissingVersionAttribute";
    case Errc::empty_samples: return "EmptySamples";
    case Errc::calibration_failed: return "CalibrationFailed";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace chunkstore
