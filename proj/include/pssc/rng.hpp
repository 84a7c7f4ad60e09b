#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace pssc {

/// Random engine used throughout. Streams are separated by deriving seeds
/// with `derive_seed`, never by sharing one engine across jobs.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed as a pure function of a parent seed and a path of keys.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(parent);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline std::uint64_t seed_key(double value) noexcept {
  return std::bit_cast<std::uint64_t>(value);
}

}  // namespace pssc
