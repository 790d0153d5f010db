// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "chunkstore/codec/chunking.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/protocol/records.hpp"

namespace chunkstore::protocol {

struct ReadOptions {
  /// How many older committed versions to try after the newest one fails
  /// validation.
  std::uint32_t max_fallback = 2;
  /// Verify per-chunk digests when the chunk records carry them. The
  /// whole-payload digest is always verified.
  bool verify_chunk_digests = true;
};

/// Reads the newest committed version of an entity with a single partition
/// query, validating count, contiguity, size and digest before returning.
/// A version that fails validation (lost or corrupt chunk) falls back to
/// the next-newest committed version, up to max_fallback times.
inline ReadResult read_entity(const kv::RegionStore& store,
                              const std::string& entity_id,
                              const ReadOptions& opts = {}) {
  if (entity_id.empty())
    raise(Errc::invalid_argument, "entity_id must be non-empty");
  const std::vector<kv::StoredItem> items =
      store.query_partition(entity_id, std::string_view("V#"));

  // Ascending scan puts each version's chunks directly before its metadata;
  // walk backwards to visit metadata records newest-first.
  std::uint32_t depth = 0;
  bool saw_committed = false;
  std::string first_failure;
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    auto meta = item_to_metadata(*it);
    if (!meta || meta->status != EntityStatus::committed) continue;
    if (saw_committed) {
      if (depth >= opts.max_fallback) break;
      ++depth;
    }
    saw_committed = true;

    const std::string prefix = codec::version_key_prefix(meta->version);
    std::vector<codec::ChunkSlice> slices;
    slices.reserve(static_cast<std::size_t>(meta->chunk_count));
    bool chunk_digest_ok = true;
    for (const kv::StoredItem& item : items) {
      if (item.key.sort_key.compare(0, prefix.size(), prefix) != 0) continue;
      auto chunk = item_to_chunk(item);
      if (!chunk) continue;
      if (opts.verify_chunk_digests && chunk->chunk_digest &&
          codec::compute_digest(chunk->data, chunk->chunk_digest->kind) !=
              *chunk->chunk_digest) {
        chunk_digest_ok = false;
        break;
      }
      slices.push_back(codec::ChunkSlice{chunk->index, chunk->data});
    }
    if (!chunk_digest_ok) {
      if (first_failure.empty())
        first_failure = "chunk digest mismatch at version " +
                        meta->version.text();
      continue;
    }
    try {
      Bytes payload = codec::reassemble(*meta, slices);
      ReadResult result;
      result.payload = std::move(payload);
      result.version = meta->version;
      result.fallback_depth = depth;
      return result;
    } catch (const Error& e) {
      if (first_failure.empty()) first_failure = e.what();
      continue;
    }
  }
  if (!saw_committed)
    raise(Errc::entity_not_found,
          "no committed version for entity " + entity_id);
  raise(Errc::entity_corrupt, "all candidate versions of " + entity_id +
                                  " failed validation; first failure: " +
                                  first_failure);
}

}  // namespace chunkstore::protocol
