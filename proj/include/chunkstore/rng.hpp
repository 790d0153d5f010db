// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace chunkstore {

/// Generator identity recorded in resolved experiment configs. Runs are only
/// comparable across builds that use the same generator and derivation.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64";

/// splitmix64 step (Steele, Lea & Flood); used to derive stream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and a label, so
/// that each consumer (arrivals, db lag, object lag, ...) has its own
/// deterministic stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  // FNV-1a over the label, folded into the master via splitmix64.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::uint64_t s = master ^ h;
  splitmix64_next(s);
  return splitmix64_next(s);
}

/// Seeded 64-bit generator with the sampling primitives the simulator needs.
/// Distribution algorithms are implemented here (not std::*_distribution) so
/// that draws are identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; safe to pass to log().
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace chunkstore
