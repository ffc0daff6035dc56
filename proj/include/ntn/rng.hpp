#pragma once

#include <cstdint>

namespace ntn {

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `index` within `stream` of a master seed. Streams are
/// a counter scheme: any (stream, index) pair can be derived independently,
/// so work can be split across threads without changing results.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) + index);
}

}  // namespace ntn
