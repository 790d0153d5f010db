// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "chunkstore/bytes.hpp"
#include "chunkstore/codec/digest.hpp"
#include "chunkstore/error.hpp"

namespace chunkstore::codec {

/// How payloads are split and checksummed. The default chunk size leaves
/// headroom under a 409,600-byte item limit for keys and attribute names.
struct ChunkingConfig {
  std::uint64_t max_chunk_bytes = 350'000;
  DigestKind checksum_kind = DigestKind::crc32c;
  /// Store (and verify on read) a digest per chunk record in addition to the
  /// whole-payload digest in the metadata record.
  bool per_chunk_digests = true;

  void validate() const {
    if (max_chunk_bytes == 0)
      raise(Errc::config_error, "max_chunk_bytes must be positive");
  }
};

/// One ordered payload fragment. Every slice except the last has exactly
/// max_chunk_bytes bytes.
struct ChunkSlice {
  std::uint32_t index = 0;
  Bytes data;
};

/// Splits `payload` into ceil(len / max_chunk_bytes) slices (zero for the
/// empty payload). Slices alias the payload buffer; nothing is copied.
inline std::vector<ChunkSlice> split_payload(const Bytes& payload,
                                             const ChunkingConfig& config) {
  config.validate();
  std::vector<ChunkSlice> out;
  const std::uint64_t n = payload.size();
  if (n == 0) return out;
  const std::uint64_t c = config.max_chunk_bytes;
  out.reserve(static_cast<std::size_t>((n + c - 1) / c));
  std::uint64_t off = 0;
  std::uint32_t index = 0;
  while (off < n) {
    const std::uint64_t take = std::min<std::uint64_t>(c, n - off);
    out.push_back(ChunkSlice{index++, payload.slice(static_cast<std::size_t>(off),
                                                    static_cast<std::size_t>(take))});
    off += take;
  }
  return out;
}

namespace detail {

// Concatenate slices, reusing the parent buffer when the slices are exactly
// adjacent views of one allocation (the common case after split_payload).
inline Bytes concat_slices(const std::vector<ChunkSlice>& chunks,
                           std::uint64_t total_bytes) {
  if (chunks.empty()) return Bytes{};
  bool adjacent = true;
  for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
    if (!chunks[i].data.directly_precedes(chunks[i + 1].data)) {
      adjacent = false;
      break;
    }
  }
  if (adjacent) {
    if (auto joined = chunks.front().data.join_through(chunks.back().data);
        joined && joined->size() == total_bytes)
      return *joined;
  }
  return Bytes::build(static_cast<std::size_t>(total_bytes),
                      [&](std::uint8_t* p, std::size_t) {
                        for (const auto& c : chunks) {
                          std::memcpy(p, c.data.data(), c.data.size());
                          p += c.data.size();
                        }
                      });
}

}  // namespace detail

/// Validates chunk completeness against the metadata record and returns the
/// reassembled payload.
///
/// `Meta` must expose chunk_count, total_bytes and digest (the protocol's
/// metadata record does). Checks run in order: count, contiguity, size,
/// digest; the first failure raises.
template <typename Meta>
Bytes reassemble(const Meta& metadata, const std::vector<ChunkSlice>& chunks) {
  if (chunks.size() != metadata.chunk_count)
    raise(Errc::chunk_count_mismatch,
          "expected " + std::to_string(metadata.chunk_count) + " chunks, got " +
              std::to_string(chunks.size()));
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].index != i)
      raise(Errc::non_contiguous_indices,
            "gap or duplicate at chunk index " + std::to_string(i));
    total += chunks[i].data.size();
  }
  if (total != metadata.total_bytes)
    raise(Errc::size_mismatch, "expected " +
                                   std::to_string(metadata.total_bytes) +
                                   " bytes, got " + std::to_string(total));
  Bytes payload = detail::concat_slices(chunks, total);
  if (compute_digest(payload, metadata.digest.kind) != metadata.digest)
    raise(Errc::digest_mismatch, "payload digest does not match metadata");
  return payload;
}

}  // namespace chunkstore::codec
