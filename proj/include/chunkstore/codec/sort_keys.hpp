// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "chunkstore/error.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::codec {

// Sort-key layout, normative and bit-exact:
//   chunk:    "V#<version-text>#CHUNK#nnnnnn"   (index zero-padded, 6 digits)
//   metadata: "V#<version-text>#META"
//
// All keys of one version share the "V#<version-text>#" prefix, chunks sort
// by numeric index, and keys of an older version sort strictly before keys
// of a newer one. "CHUNK" < "META" bytewise, so a version's chunks appear
// immediately before its metadata in an ascending range scan.

inline constexpr std::uint32_t kMaxChunkIndex = 999'999;

inline std::string version_key_prefix(const EntityVersion& version) {
  std::string out = "V#";
  out += version.text();
  out += '#';
  return out;
}

inline std::string encode_chunk_sort_key(const EntityVersion& version,
                                         std::uint32_t index) {
  if (index > kMaxChunkIndex)
    raise(Errc::index_out_of_range, "chunk index exceeds 999999");
  std::string out = version_key_prefix(version);
  char buf[16];
  std::snprintf(buf, sizeof buf, "CHUNK#%06u", index);
  out += buf;
  return out;
}

inline std::string encode_meta_sort_key(const EntityVersion& version) {
  return version_key_prefix(version) + "META";
}

struct ParsedSortKey {
  EntityVersion version;
  bool is_meta = false;
  std::uint32_t chunk_index = 0;  // valid when !is_meta
};

inline std::optional<ParsedSortKey> parse_sort_key(std::string_view sk) {
  constexpr std::size_t ver_len = EntityVersion::kTextLength;
  if (sk.size() < 2 + ver_len + 1 || sk[0] != 'V' || sk[1] != '#')
    return std::nullopt;
  auto version = EntityVersion::parse(sk.substr(2, ver_len));
  if (!version || sk[2 + ver_len] != '#') return std::nullopt;
  const std::string_view rest = sk.substr(2 + ver_len + 1);
  ParsedSortKey out;
  out.version = *version;
  if (rest == "META") {
    out.is_meta = true;
    return out;
  }
  if (rest.size() != 12 || rest.substr(0, 6) != "CHUNK#") return std::nullopt;
  std::uint32_t idx = 0;
  for (char c : rest.substr(6)) {
    if (c < '0' || c > '9') return std::nullopt;
    idx = idx * 10 + static_cast<std::uint32_t>(c - '0');
  }
  out.chunk_index = idx;
  return out;
}

}  // namespace chunkstore::codec
