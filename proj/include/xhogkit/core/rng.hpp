#pragma once

#include <cstdint>
#include <random>

namespace xhogkit {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs give
/// distinct seeds.
constexpr Seed splitmix64(Seed x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: the seed of (stream, index) depends only on
/// the master seed and the two counters, never on the order in which trials
/// were scheduled.
constexpr Seed derive_seed(Seed master, std::uint64_t stream, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ (stream * 0xD1B54A32D192ED03ULL)) ^ index);
}

inline Rng make_rng(Seed seed) { return Rng(splitmix64(seed)); }

/// Named streams used when deriving per-trial seeds.
namespace streams {
inline constexpr std::uint64_t kState = 1;
inline constexpr std::uint64_t kOracle = 2;
inline constexpr std::uint64_t kStrategy = 3;
inline constexpr std::uint64_t kAux = 4;
}  // namespace streams

}  // namespace xhogkit
