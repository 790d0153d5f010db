// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>

#include "chunkstore/codec/digest.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/object_store.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/protocol/records.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::baseline {

// Claim-check baseline: payload lives in the object bucket, the table holds
// a single pointer record per entity (sort key "PTR"). The write order
// (object first, pointer second) makes the pattern safe within one region;
// the cross-region hazard is that the two stores replicate independently.

inline constexpr std::string_view kPointerSortKey = "PTR";
inline constexpr std::string_view kAttrObjKey = "ObjKey";

struct PointerRecord {
  std::string entity_id;
  EntityVersion version;
  std::string object_key;
  std::uint64_t total_bytes = 0;
  codec::PayloadDigest digest;
};

/// Versioned object keys: objects are never overwritten in place.
inline std::string object_key_for(const std::string& entity_id,
                                  const EntityVersion& version) {
  return entity_id + "/" + version.text();
}

inline kv::StoredItem pointer_to_item(const PointerRecord& rec) {
  return kv::make_item(
      rec.entity_id, std::string(kPointerSortKey),
      {{std::string(protocol::kAttrVer), rec.version.text()},
       {std::string(kAttrObjKey), rec.object_key},
       {std::string(protocol::kAttrBytes),
        static_cast<std::int64_t>(rec.total_bytes)},
       {std::string(protocol::kAttrDigest), Bytes::of(rec.digest.value)},
       {std::string(protocol::kAttrDigestKind),
        std::string(codec::to_string(rec.digest.kind))}});
}

inline std::optional<PointerRecord> item_to_pointer(
    const kv::StoredItem& item) {
  if (item.key.sort_key != kPointerSortKey) return std::nullopt;
  const std::string* ver_text = item.find_string(protocol::kAttrVer);
  const std::string* obj_key = item.find_string(kAttrObjKey);
  const auto bytes = item.find_int(protocol::kAttrBytes);
  const Bytes* digest = item.find_bytes(protocol::kAttrDigest);
  const std::string* kind_text = item.find_string(protocol::kAttrDigestKind);
  if (!ver_text || !obj_key || !bytes || !digest || !kind_text)
    return std::nullopt;
  auto ver = EntityVersion::parse(*ver_text);
  auto kind = codec::digest_kind_from_string(*kind_text);
  if (!ver || !kind) return std::nullopt;
  PointerRecord rec;
  rec.entity_id = item.key.partition_key;
  rec.version = *ver;
  rec.object_key = *obj_key;
  rec.total_bytes = static_cast<std::uint64_t>(*bytes);
  rec.digest = codec::PayloadDigest{*kind, digest->to_string()};
  return rec;
}

/// Writes the payload to the bucket, then the pointer record to the table.
/// The object put completes before the pointer put begins.
inline protocol::WriteReceipt write_pointer_entity(
    kv::RegionStore& store, kv::ObjectStoreModel& bucket,
    const std::string& entity_id, const Bytes& payload,
    const EntityVersion& version,
    codec::DigestKind digest_kind = codec::DigestKind::crc32c) {
  if (entity_id.empty())
    raise(Errc::invalid_argument, "entity_id must be non-empty");
  PointerRecord rec;
  rec.entity_id = entity_id;
  rec.version = version;
  rec.object_key = object_key_for(entity_id, version);
  rec.total_bytes = payload.size();
  rec.digest = codec::compute_digest(payload, digest_kind);

  bucket.object_put(rec.object_key, payload, version);
  store.put_item(pointer_to_item(rec));

  protocol::WriteReceipt receipt;
  receipt.version = version;
  receipt.chunk_count = 0;
  receipt.path_taken = protocol::WritePath::transactional;
  receipt.bytes_written = payload.size();
  return receipt;
}

/// Reads the newest pointer record, then fetches and validates the object.
/// An object miss surfaces as DanglingPointer, the modeled 404.
inline protocol::ReadResult read_pointer_entity(
    const kv::RegionStore& store, const kv::ObjectStoreModel& bucket,
    const std::string& entity_id) {
  if (entity_id.empty())
    raise(Errc::invalid_argument, "entity_id must be non-empty");
  auto item =
      store.get_item(kv::ItemKey{entity_id, std::string(kPointerSortKey)});
  if (!item)
    raise(Errc::entity_not_found, "no pointer record for " + entity_id);
  auto rec = item_to_pointer(*item);
  if (!rec)
    raise(Errc::entity_not_found, "malformed pointer record for " + entity_id);

  Bytes payload;
  try {
    payload = bucket.object_get(rec->object_key);
  } catch (const Error& e) {
    if (e.code() == Errc::object_not_found)
      raise(Errc::dangling_pointer,
            "pointer for " + entity_id + " references missing object " +
                rec->object_key);
    throw;
  }
  if (payload.size() != rec->total_bytes)
    raise(Errc::size_mismatch, "object size does not match pointer record");
  if (codec::compute_digest(payload, rec->digest.kind) != rec->digest)
    raise(Errc::digest_mismatch, "object digest does not match pointer record");

  protocol::ReadResult result;
  result.payload = std::move(payload);
  result.version = rec->version;
  result.fallback_depth = 0;
  return result;
}

}  // namespace chunkstore::baseline
