// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "chunkstore/codec/sort_keys.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/protocol/records.hpp"

namespace chunkstore::protocol {

/// Deletes records of committed versions older than the `keep_newest` newest
/// committed ones, plus any uncommitted (WRITING or abandoned chunk-only)
/// version older than the newest committed version. Uncommitted versions
/// newer than the newest committed one may still be in flight and are left
/// alone. Returns the number of records deleted.
inline std::uint64_t gc_versions(kv::RegionStore& store,
                                 const std::string& entity_id,
                                 std::uint64_t keep_newest) {
  if (keep_newest < 1)
    raise(Errc::invalid_argument, "keep_newest must be at least 1");
  const std::vector<kv::StoredItem> items =
      store.query_partition(entity_id, std::string_view("V#"));

  struct VersionBucket {
    bool committed = false;
    std::vector<kv::ItemKey> keys;
  };
  // Keyed by version text; map order equals version order.
  std::map<std::string, VersionBucket> versions;
  for (const kv::StoredItem& item : items) {
    auto parsed = codec::parse_sort_key(item.key.sort_key);
    if (!parsed) continue;
    VersionBucket& bucket = versions[parsed->version.text()];
    bucket.keys.push_back(item.key);
    if (parsed->is_meta) {
      const std::string* status = item.find_string(kAttrStatus);
      if (status && *status == to_string(EntityStatus::committed))
        bucket.committed = true;
    }
  }

  std::string newest_committed;
  std::uint64_t committed_total = 0;
  for (const auto& [text, bucket] : versions) {
    if (bucket.committed) {
      newest_committed = text;
      ++committed_total;
    }
  }
  if (committed_total == 0) return 0;  // nothing safe to judge stale

  std::uint64_t committed_kept = committed_total;
  std::uint64_t deleted = 0;
  for (const auto& [text, bucket] : versions) {
    bool drop;
    if (bucket.committed) {
      drop = committed_kept > keep_newest && text != newest_committed;
      if (drop) --committed_kept;
    } else {
      drop = text < newest_committed;
    }
    if (!drop) continue;
    for (const kv::ItemKey& key : bucket.keys) {
      store.delete_item(key);
      ++deleted;
    }
  }
  return deleted;
}

}  // namespace chunkstore::protocol
