// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chunkstore/codec/chunking.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/protocol/records.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::protocol {

struct WriteOptions {
  codec::ChunkingConfig chunking{};
  /// Hard cap on entity size; keeps two-phase batch counts small.
  std::uint64_t max_entity_bytes = 16 * 1024 * 1024;
  /// Test hook, invoked after every store acknowledgment during a write.
  /// Throwing from it models a writer crash at that point.
  std::function<void()> after_store_ack{};
};

/// Payload with its chunk slices and digests already computed. Splitting is
/// zero-copy, so preparing once and writing many times (as the simulator
/// does) costs one digest pass total.
struct PreparedPayload {
  Bytes payload;
  codec::ChunkingConfig config;
  std::vector<codec::ChunkSlice> slices;
  codec::PayloadDigest digest;
  std::vector<codec::PayloadDigest> chunk_digests;  // empty unless configured

  static PreparedPayload prepare(Bytes payload,
                                 const codec::ChunkingConfig& config) {
    PreparedPayload p;
    p.payload = std::move(payload);
    p.config = config;
    p.slices = codec::split_payload(p.payload, config);
    p.digest = codec::compute_digest(p.payload, config.checksum_kind);
    if (config.per_chunk_digests) {
      p.chunk_digests.reserve(p.slices.size());
      for (const auto& s : p.slices)
        p.chunk_digests.push_back(
            codec::compute_digest(s.data, config.checksum_kind));
    }
    return p;
  }
};

namespace detail {

inline void ack(const WriteOptions& opts) {
  if (opts.after_store_ack) opts.after_store_ack();
}

inline bool fits_single_transaction(const kv::StoreLimits& limits,
                                    std::size_t item_count,
                                    std::uint64_t total_bytes) {
  return item_count <= limits.max_transaction_items &&
         total_bytes <= limits.max_transaction_bytes;
}

}  // namespace detail

/// Two-phase fallback for batches that exceed the store's transaction
/// limits. Phase 1 writes all chunk records (grouped into maximal batches
/// under the limits) plus the metadata record with status WRITING; phase 2
/// flips the metadata to COMMITTED with a conditional put. A crash anywhere
/// before the flip leaves a WRITING version that readers ignore.
inline WriteReceipt two_phase_write(kv::RegionStore& store,
                                    std::span<const ChunkRecord> chunks,
                                    const EntityMetadata& metadata,
                                    const WriteOptions& opts = {}) {
  const kv::StoreLimits& limits = store.limits();

  std::vector<kv::StoredItem> items;
  items.reserve(chunks.size());
  std::uint64_t total_bytes = 0;
  for (const ChunkRecord& c : chunks) {
    items.push_back(chunk_to_item(c));
    total_bytes += items.back().serialized_size;
  }
  EntityMetadata meta_writing = metadata;
  meta_writing.status = EntityStatus::writing;
  kv::StoredItem meta_item = metadata_to_item(meta_writing);
  if (detail::fits_single_transaction(limits, items.size() + 1,
                                      total_bytes + meta_item.serialized_size))
    raise(Errc::invalid_argument,
          "two_phase_write invoked for a batch that fits one transaction");

  // Phase 1: chunk records in maximal sub-batches, then provisional
  // metadata. Deterministic order so crash points are reproducible.
  std::vector<std::pair<kv::StoredItem, kv::Condition>> batch;
  std::uint64_t batch_bytes = 0;
  auto flush = [&] {
    if (batch.empty()) return;
    store.transact_write(batch);
    detail::ack(opts);
    batch.clear();
    batch_bytes = 0;
  };
  for (auto& item : items) {
    if (batch.size() + 1 > limits.max_transaction_items ||
        batch_bytes + item.serialized_size > limits.max_transaction_bytes)
      flush();
    batch_bytes += item.serialized_size;
    batch.emplace_back(std::move(item), kv::Condition::none());
  }
  flush();
  store.put_item(meta_item);
  detail::ack(opts);

  // Phase 2: commit barrier. The condition catches interference from any
  // other actor that touched this version's metadata.
  EntityMetadata meta_committed = metadata;
  meta_committed.status = EntityStatus::committed;
  store.put_item(metadata_to_item(meta_committed),
                 kv::Condition::attribute_equals(
                     std::string(kAttrStatus),
                     std::string(to_string(EntityStatus::writing))));
  detail::ack(opts);

  WriteReceipt receipt;
  receipt.version = metadata.version;
  receipt.chunk_count = chunks.size();
  receipt.path_taken = WritePath::two_phase;
  receipt.bytes_written = metadata.total_bytes;
  return receipt;
}

/// The chunked-object write: split, build chunk items plus the metadata
/// commit barrier, and apply them in one transaction when the batch fits
/// the store's limits, otherwise via two_phase_write.
inline WriteReceipt write_entity(kv::RegionStore& store,
                                 const std::string& entity_id,
                                 const PreparedPayload& prepared,
                                 const EntityVersion& version,
                                 const WriteOptions& opts = {}) {
  if (entity_id.empty())
    raise(Errc::invalid_argument, "entity_id must be non-empty");
  if (prepared.payload.size() > opts.max_entity_bytes)
    raise(Errc::entity_too_large,
          std::to_string(prepared.payload.size()) + " bytes exceeds cap of " +
              std::to_string(opts.max_entity_bytes));

  EntityMetadata meta;
  meta.entity_id = entity_id;
  meta.version = version;
  meta.chunk_count = prepared.slices.size();
  meta.total_bytes = prepared.payload.size();
  meta.digest = prepared.digest;
  meta.status = EntityStatus::committed;
  meta.writer_region = store.region_id();

  std::vector<ChunkRecord> chunks;
  chunks.reserve(prepared.slices.size());
  for (std::size_t i = 0; i < prepared.slices.size(); ++i) {
    ChunkRecord c;
    c.entity_id = entity_id;
    c.version = version;
    c.index = prepared.slices[i].index;
    c.data = prepared.slices[i].data;
    if (!prepared.chunk_digests.empty()) c.chunk_digest = prepared.chunk_digests[i];
    chunks.push_back(std::move(c));
  }

  // A chunk item that cannot fit the store's item limit means the chunk
  // size was configured against the wrong store.
  std::vector<std::pair<kv::StoredItem, kv::Condition>> batch;
  batch.reserve(chunks.size() + 1);
  std::uint64_t total_bytes = 0;
  for (const ChunkRecord& c : chunks) {
    kv::StoredItem item = chunk_to_item(c);
    if (item.serialized_size > store.limits().max_item_size)
      raise(Errc::config_error,
            "chunk item of " + std::to_string(item.serialized_size) +
                " bytes exceeds the store's max_item_size; lower "
                "max_chunk_bytes");
    total_bytes += item.serialized_size;
    batch.emplace_back(std::move(item), kv::Condition::none());
  }
  kv::StoredItem meta_item = metadata_to_item(meta);
  total_bytes += meta_item.serialized_size;
  batch.emplace_back(std::move(meta_item), kv::Condition::none());

  if (detail::fits_single_transaction(store.limits(), batch.size(),
                                      total_bytes)) {
    store.transact_write(batch);
    detail::ack(opts);
    WriteReceipt receipt;
    receipt.version = version;
    receipt.chunk_count = meta.chunk_count;
    receipt.path_taken = WritePath::transactional;
    receipt.bytes_written = meta.total_bytes;
    return receipt;
  }
  return two_phase_write(store, chunks, meta, opts);
}

inline WriteReceipt write_entity(kv::RegionStore& store,
                                 const std::string& entity_id,
                                 const Bytes& payload,
                                 const EntityVersion& version,
                                 const WriteOptions& opts = {}) {
  return write_entity(store, entity_id,
                      PreparedPayload::prepare(payload, opts.chunking), version,
                      opts);
}

/// Caller-level retry for version races: on ConditionFailed, re-issue with a
/// fresh version, at most `max_attempts` times.
inline WriteReceipt write_entity_retrying(kv::RegionStore& store,
                                          const std::string& entity_id,
                                          const Bytes& payload,
                                          VersionGenerator& versions,
                                          const WriteOptions& opts = {},
                                          int max_attempts = 3) {
  const PreparedPayload prepared =
      PreparedPayload::prepare(payload, opts.chunking);
  for (int attempt = 1;; ++attempt) {
    try {
      return write_entity(store, entity_id, prepared, versions.next(), opts);
    } catch (const Error& e) {
      if (e.code() != Errc::condition_failed || attempt >= max_attempts)
        throw;
    }
  }
}

}  // namespace chunkstore::protocol
