// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define CHUNKSTORE_CRC32C_X86 1
#endif

namespace chunkstore::codec {

namespace detail {

// Castagnoli polynomial, reflected.
inline constexpr std::uint32_t kCrc32cPoly = 0x82f63b78u;

inline const std::array<std::array<std::uint32_t, 256>, 8>& crc32c_tables() {
  static const auto tables = [] {
    std::array<std::array<std::uint32_t, 256>, 8> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t crc = i;
      for (int k = 0; k < 8; ++k)
        crc = (crc >> 1) ^ ((crc & 1) ? kCrc32cPoly : 0);
      t[0][i] = crc;
    }
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t crc = t[0][i];
      for (std::size_t j = 1; j < 8; ++j) {
        crc = t[0][crc & 0xff] ^ (crc >> 8);
        t[j][i] = crc;
      }
    }
    return t;
  }();
  return tables;
}

// Slicing-by-8 software path.
inline std::uint32_t crc32c_sw(std::uint32_t crc, const void* data,
                               std::size_t n) {
  const auto& t = crc32c_tables();
  const auto* p = static_cast<const std::uint8_t*>(data);
  crc = ~crc;
  while (n > 0 && (reinterpret_cast<std::uintptr_t>(p) & 7) != 0) {
    crc = t[0][(crc ^ *p++) & 0xff] ^ (crc >> 8);
    --n;
  }
  while (n >= 8) {
    std::uint64_t word;
    std::memcpy(&word, p, 8);
    word ^= crc;
    crc = t[7][word & 0xff] ^ t[6][(word >> 8) & 0xff] ^
          t[5][(word >> 16) & 0xff] ^ t[4][(word >> 24) & 0xff] ^
          t[3][(word >> 32) & 0xff] ^ t[2][(word >> 40) & 0xff] ^
          t[1][(word >> 48) & 0xff] ^ t[0][(word >> 56) & 0xff];
    p += 8;
    n -= 8;
  }
  while (n > 0) {
    crc = t[0][(crc ^ *p++) & 0xff] ^ (crc >> 8);
    --n;
  }
  return ~crc;
}

#ifdef CHUNKSTORE_CRC32C_X86
__attribute__((target("sse4.2"))) inline std::uint32_t crc32c_hw(
    std::uint32_t crc, const void* data, std::size_t n) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  crc = ~crc;
  while (n > 0 && (reinterpret_cast<std::uintptr_t>(p) & 7) != 0) {
    crc = _mm_crc32_u8(crc, *p++);
    --n;
  }
  std::uint64_t crc64 = crc;
  while (n >= 8) {
    std::uint64_t word;
    std::memcpy(&word, p, 8);
    crc64 = _mm_crc32_u64(crc64, word);
    p += 8;
    n -= 8;
  }
  crc = static_cast<std::uint32_t>(crc64);
  while (n > 0) {
    crc = _mm_crc32_u8(crc, *p++);
    --n;
  }
  return ~crc;
}

inline bool crc32c_hw_available() {
  static const bool available = __builtin_cpu_supports("sse4.2");
  return available;
}
#endif

}  // namespace detail

/// CRC-32C (Castagnoli) of `data`, optionally continuing from a prior value.
/// Uses the SSE4.2 instruction when the CPU has it, table-driven otherwise.
inline std::uint32_t crc32c(const void* data, std::size_t n,
                            std::uint32_t prior = 0) {
#ifdef CHUNKSTORE_CRC32C_X86
  if (detail::crc32c_hw_available()) return detail::crc32c_hw(prior, data, n);
#endif
  return detail::crc32c_sw(prior, data, n);
}

/// Software path exposed for cross-checking against the hardware path.
inline std::uint32_t crc32c_reference(const void* data, std::size_t n,
                                      std::uint32_t prior = 0) {
  return detail::crc32c_sw(prior, data, n);
}

}  // namespace chunkstore::codec
