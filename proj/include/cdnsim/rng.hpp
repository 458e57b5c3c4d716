// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace cdnsim {

namespace detail {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t rotl64(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace detail

/// Deterministic 64-bit generator (xoshiro256++ seeded through splitmix64).
/// State transitions are pure integer arithmetic, so a given seed yields the
/// same draw sequence on every platform. Distinct logical streams are derived
/// from one master seed via stream(); draws on one stream never affect another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64_next(sm);
  }

  /// Derives an independent stream from (master seed, stream name, index).
  static Rng stream(std::uint64_t master_seed, std::string_view name,
                    std::uint64_t index = 0) {
    std::uint64_t mix = master_seed;
    mix ^= detail::fnv1a64(name) + 0x9e3779b97f4a7c15ULL;
    std::uint64_t sm = mix;
    mix = detail::splitmix64_next(sm) ^ (index * 0xd1b54a32d192ed03ULL + 1);
    return Rng(mix);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result =
        detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Exponential inter-arrival with the given rate (events per unit time).
  double exponential(double rate) {
    // uniform01() < 1, so the argument of log stays strictly positive
    return -std::log(1.0 - uniform01()) / rate;
  }

  /// Standard normal via Box-Muller (two draws, no rejection loop).
  double normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

 private:
  std::uint64_t state_[4];
};

}  // namespace cdnsim
