// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "chunkstore/bytes.hpp"
#include "chunkstore/codec/digest.hpp"
#include "chunkstore/codec/sort_keys.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::protocol {

// Normative attribute names for stored items.
inline constexpr std::string_view kAttrVer = "Ver";
inline constexpr std::string_view kAttrCount = "Count";
inline constexpr std::string_view kAttrBytes = "Bytes";
inline constexpr std::string_view kAttrDigest = "Digest";
inline constexpr std::string_view kAttrDigestKind = "DigestKind";
inline constexpr std::string_view kAttrStatus = "Status";
inline constexpr std::string_view kAttrRegion = "Region";
inline constexpr std::string_view kAttrData = "Data";
inline constexpr std::string_view kAttrChunkDigest = "ChunkDigest";

/// WRITING marks a two-phase write still in flight; readers ignore such
/// versions. The transactional path commits directly.
enum class EntityStatus { writing, committed };

inline constexpr std::string_view to_string(EntityStatus s) {
  return s == EntityStatus::writing ? "WRITING" : "COMMITTED";
}

inline std::optional<EntityStatus> status_from_string(std::string_view s) {
  if (s == "WRITING") return EntityStatus::writing;
  if (s == "COMMITTED") return EntityStatus::committed;
  return std::nullopt;
}

/// The commit-barrier record. If a reader sees this with status COMMITTED,
/// every chunk record of (entity_id, version) was durably written first.
struct EntityMetadata {
  std::string entity_id;
  EntityVersion version;
  std::uint64_t chunk_count = 0;
  std::uint64_t total_bytes = 0;
  codec::PayloadDigest digest;
  EntityStatus status = EntityStatus::committed;
  std::string writer_region;
};

/// One ordered payload fragment keyed by (entity id, version, index).
struct ChunkRecord {
  std::string entity_id;
  EntityVersion version;
  std::uint32_t index = 0;
  Bytes data;
  std::optional<codec::PayloadDigest> chunk_digest;
};

enum class WritePath { transactional, two_phase };

inline constexpr std::string_view to_string(WritePath p) {
  return p == WritePath::transactional ? "transactional" : "two_phase";
}

struct WriteReceipt {
  EntityVersion version;
  std::uint64_t chunk_count = 0;
  WritePath path_taken = WritePath::transactional;
  std::uint64_t bytes_written = 0;
};

struct ReadResult {
  Bytes payload;
  EntityVersion version;
  /// 0 when the newest committed version was served; each fallback to an
  /// older version adds one.
  std::uint32_t fallback_depth = 0;
};

inline kv::StoredItem metadata_to_item(const EntityMetadata& meta) {
  return kv::make_item(
      meta.entity_id, codec::encode_meta_sort_key(meta.version),
      {{std::string(kAttrVer), meta.version.text()},
       {std::string(kAttrCount), static_cast<std::int64_t>(meta.chunk_count)},
       {std::string(kAttrBytes), static_cast<std::int64_t>(meta.total_bytes)},
       {std::string(kAttrDigest), Bytes::of(meta.digest.value)},
       {std::string(kAttrDigestKind),
        std::string(codec::to_string(meta.digest.kind))},
       {std::string(kAttrStatus), std::string(to_string(meta.status))},
       {std::string(kAttrRegion), meta.writer_region}});
}

inline kv::StoredItem chunk_to_item(const ChunkRecord& chunk) {
  std::vector<std::pair<std::string, kv::AttrValue>> attrs = {
      {std::string(kAttrVer), chunk.version.text()},
      {std::string(kAttrData), chunk.data}};
  if (chunk.chunk_digest)
    attrs.emplace_back(std::string(kAttrChunkDigest),
                       Bytes::of(chunk.chunk_digest->value));
  return kv::make_item(chunk.entity_id,
                       codec::encode_chunk_sort_key(chunk.version, chunk.index),
                       std::move(attrs));
}

/// Decodes a metadata item; nullopt when the item is not a well-formed
/// metadata record.
inline std::optional<EntityMetadata> item_to_metadata(
    const kv::StoredItem& item) {
  auto parsed = codec::parse_sort_key(item.key.sort_key);
  if (!parsed || !parsed->is_meta) return std::nullopt;
  const std::string* ver_text = item.find_string(kAttrVer);
  const auto count = item.find_int(kAttrCount);
  const auto bytes = item.find_int(kAttrBytes);
  const Bytes* digest = item.find_bytes(kAttrDigest);
  const std::string* digest_kind = item.find_string(kAttrDigestKind);
  const std::string* status_text = item.find_string(kAttrStatus);
  const std::string* region = item.find_string(kAttrRegion);
  if (!ver_text || !count || !bytes || !digest || !digest_kind ||
      !status_text || !region)
    return std::nullopt;
  auto kind = codec::digest_kind_from_string(*digest_kind);
  auto status = status_from_string(*status_text);
  auto ver = EntityVersion::parse(*ver_text);
  if (!kind || !status || !ver || *ver != parsed->version) return std::nullopt;
  EntityMetadata meta;
  meta.entity_id = item.key.partition_key;
  meta.version = *ver;
  meta.chunk_count = static_cast<std::uint64_t>(*count);
  meta.total_bytes = static_cast<std::uint64_t>(*bytes);
  meta.digest = codec::PayloadDigest{*kind, digest->to_string()};
  meta.status = *status;
  meta.writer_region = *region;
  return meta;
}

inline std::optional<ChunkRecord> item_to_chunk(const kv::StoredItem& item) {
  auto parsed = codec::parse_sort_key(item.key.sort_key);
  if (!parsed || parsed->is_meta) return std::nullopt;
  const std::string* ver_text = item.find_string(kAttrVer);
  const Bytes* data = item.find_bytes(kAttrData);
  if (!ver_text || !data) return std::nullopt;
  auto ver = EntityVersion::parse(*ver_text);
  if (!ver || *ver != parsed->version) return std::nullopt;
  ChunkRecord chunk;
  chunk.entity_id = item.key.partition_key;
  chunk.version = *ver;
  chunk.index = parsed->chunk_index;
  chunk.data = *data;
  if (const Bytes* cd = item.find_bytes(kAttrChunkDigest)) {
    const auto kind = cd->size() == 32 ? codec::DigestKind::sha256
                                       : codec::DigestKind::crc32c;
    chunk.chunk_digest = codec::PayloadDigest{kind, cd->to_string()};
  }
  return chunk;
}

}  // namespace chunkstore::protocol
