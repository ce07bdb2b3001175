// rng.hpp — seed mixing and per-purpose stream derivation.
#pragma once

#include <cstdint>
#include <random>

namespace gsbm {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t { Points = 1, Labels = 2, Edges = 3 };

// A master seed yields one independent generator per purpose, so the same
// point set can be re-dressed with fresh labels or edges.
inline std::mt19937_64 stream_rng(std::uint64_t master, Stream s) {
  return std::mt19937_64(mix64(master ^ (static_cast<std::uint64_t>(s)
                                         * 0xd6e8feb86659fd93ULL)));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point_index,
                                 std::uint64_t trial_index) {
  return mix64(mix64(mix64(base) ^ point_index) ^ trial_index);
}

}  // namespace gsbm
