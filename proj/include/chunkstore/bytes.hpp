// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chunkstore {

/// Immutable, reference-counted byte buffer with cheap aliasing slices.
///
/// A Bytes value never changes after construction, so copies and sub-slices
/// share the underlying allocation. Equality compares contents, not identity.
class Bytes {
 public:
  Bytes() = default;

  /// Copies `n` bytes starting at `p` into a fresh buffer.
  static Bytes copy(const void* p, std::size_t n) {
    if (n == 0) return Bytes{};
    auto buf = std::shared_ptr<std::uint8_t[]>(new std::uint8_t[n]);
    std::memcpy(buf.get(), p, n);
    return Bytes(std::move(buf), 0, n);
  }

  static Bytes of(std::string_view s) { return copy(s.data(), s.size()); }

  /// Allocates `n` bytes and lets `fill(ptr, n)` initialize them in place.
  template <typename F>
  static Bytes build(std::size_t n, F&& fill) {
    if (n == 0) return Bytes{};
    auto buf = std::shared_ptr<std::uint8_t[]>(new std::uint8_t[n]);
    fill(buf.get(), n);
    return Bytes(std::move(buf), 0, n);
  }

  const std::uint8_t* data() const {
    return buf_ ? buf_.get() + off_ : nullptr;
  }
  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  std::string_view view() const {
    return {reinterpret_cast<const char*>(data()), len_};
  }
  std::string to_string() const { return std::string(view()); }

  /// Aliasing sub-slice; shares the parent allocation.
  Bytes slice(std::size_t off, std::size_t n) const {
    if (off > len_ || n > len_ - off)
      throw std::out_of_range("Bytes::slice out of range");
    if (n == 0) return Bytes{};
    return Bytes(buf_, off_ + off, n);
  }

  /// True when `next` is a slice of the same allocation starting exactly
  /// where this slice ends. Lets consumers reassemble without copying.
  bool directly_precedes(const Bytes& next) const {
    return buf_ && buf_ == next.buf_ && off_ + len_ == next.off_;
  }

  /// Covering slice from this slice's first byte through `last`'s final
  /// byte, when both view the same allocation. Used to undo a split without
  /// copying.
  std::optional<Bytes> join_through(const Bytes& last) const {
    if (!buf_ || buf_ != last.buf_) return std::nullopt;
    if (last.off_ + last.len_ < off_) return std::nullopt;
    return Bytes(buf_, off_, last.off_ + last.len_ - off_);
  }

  friend bool operator==(const Bytes& a, const Bytes& b) {
    if (a.len_ != b.len_) return false;
    if (a.len_ == 0) return true;
    if (a.data() == b.data()) return true;
    return std::memcmp(a.data(), b.data(), a.len_) == 0;
  }
  friend bool operator!=(const Bytes& a, const Bytes& b) { return !(a == b); }

 private:
  Bytes(std::shared_ptr<const std::uint8_t[]> buf, std::size_t off,
        std::size_t len)
      : buf_(std::move(buf)), off_(off), len_(len) {}

  std::shared_ptr<const std::uint8_t[]> buf_;
  std::size_t off_ = 0;
  std::size_t len_ = 0;
};

namespace detail {
inline constexpr char kBase64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}  // namespace detail

/// RFC 4648 base64 (with padding).
inline std::string base64_encode(std::string_view in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  const auto* p = reinterpret_cast<const unsigned char*>(in.data());
  for (; i + 3 <= in.size(); i += 3) {
    std::uint32_t v = (p[i] << 16) | (p[i + 1] << 8) | p[i + 2];
    out.push_back(detail::kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(detail::kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(detail::kBase64Alphabet[(v >> 6) & 63]);
    out.push_back(detail::kBase64Alphabet[v & 63]);
  }
  const std::size_t rem = in.size() - i;
  if (rem == 1) {
    std::uint32_t v = p[i] << 16;
    out.push_back(detail::kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(detail::kBase64Alphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rem == 2) {
    std::uint32_t v = (p[i] << 16) | (p[i + 1] << 8);
    out.push_back(detail::kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(detail::kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(detail::kBase64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

inline std::string base64_encode(const Bytes& b) {
  return base64_encode(b.view());
}

/// Strict decode; throws std::invalid_argument on malformed input.
inline std::string base64_decode(std::string_view in) {
  static const auto table = [] {
    std::array<std::int8_t, 256> t{};
    t.fill(-1);
    for (int i = 0; i < 64; ++i)
      t[static_cast<unsigned char>(detail::kBase64Alphabet[i])] =
          static_cast<std::int8_t>(i);
    return t;
  }();
  if (in.size() % 4 != 0)
    throw std::invalid_argument("base64: length not a multiple of 4");
  std::string out;
  out.reserve(in.size() / 4 * 3);
  for (std::size_t i = 0; i < in.size(); i += 4) {
    int pad = 0;
    std::uint32_t v = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = in[i + j];
      if (c == '=') {
        if (i + 4 != in.size() || j < 2) {
          throw std::invalid_argument("base64: misplaced padding");
        }
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw std::invalid_argument("base64: data after padding");
      const std::int8_t d = table[static_cast<unsigned char>(c)];
      if (d < 0) throw std::invalid_argument("base64: invalid character");
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

inline std::string to_hex(std::string_view in) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(in.size() * 2);
  for (unsigned char c : in) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

}  // namespace chunkstore
