#pragma once

#include <cstdint>
#include <random>

namespace mvge {

using Rng = std::mt19937_64;

// Independent subsystem streams. Every random draw in the library comes from a
// stream derived from the single user seed plus one of these tags.
enum class Stream : std::uint64_t {
  kInit = 1,
  kWalks = 2,
  kSynth = 3,
  kSplit = 4,
  kLogreg = 5,
  kAdjSampling = 6,
  kPairs = 7,
  kGradCheck = 8,
  kRepeat = 9,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream tag,
                                    std::uint64_t index = 0) noexcept {
  return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(tag)) + index);
}

inline Rng make_rng(std::uint64_t seed, Stream tag, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, tag, index));
}

// Uniform integer in [0, n). n must be positive.
template <class R>
std::uint64_t uniform_index(R& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace mvge
