// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "chunkstore/bytes.hpp"
#include "chunkstore/codec/crc32c.hpp"
#include "chunkstore/codec/sha256.hpp"
#include "chunkstore/error.hpp"

namespace chunkstore::codec {

enum class DigestKind { crc32c, sha256 };

inline constexpr std::string_view to_string(DigestKind k) {
  return k == DigestKind::crc32c ? "crc32c" : "sha256";
}

inline std::optional<DigestKind> digest_kind_from_string(std::string_view s) {
  if (s == "crc32c") return DigestKind::crc32c;
  if (s == "sha256") return DigestKind::sha256;
  return std::nullopt;
}

/// Checksum value plus the algorithm that produced it. `value` holds raw
/// digest bytes: 4 (crc32c, big-endian) or 32 (sha256).
struct PayloadDigest {
  DigestKind kind = DigestKind::crc32c;
  std::string value;

  friend bool operator==(const PayloadDigest&, const PayloadDigest&) = default;

  std::string hex() const { return to_hex(value); }
};

inline PayloadDigest compute_digest(const void* data, std::size_t n,
                                    DigestKind kind) {
  PayloadDigest d;
  d.kind = kind;
  if (kind == DigestKind::crc32c) {
    const std::uint32_t crc = crc32c(data, n);
    d.value.resize(4);
    d.value[0] = static_cast<char>(crc >> 24);
    d.value[1] = static_cast<char>(crc >> 16);
    d.value[2] = static_cast<char>(crc >> 8);
    d.value[3] = static_cast<char>(crc);
  } else {
    const auto h = sha256(data, n);
    d.value.assign(reinterpret_cast<const char*>(h.data()), h.size());
  }
  return d;
}

inline PayloadDigest compute_digest(const Bytes& payload, DigestKind kind) {
  return compute_digest(payload.data(), payload.size(), kind);
}

inline PayloadDigest compute_digest(std::string_view payload,
                                    DigestKind kind) {
  return compute_digest(payload.data(), payload.size(), kind);
}

}  // namespace chunkstore::codec
