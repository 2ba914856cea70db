#pragma once

#include <cstdint>
#include <random>

namespace acv {

/// SplitMix64 finalizer. Used to derive independent per-trial seeds from a
/// master seed and a stream counter, so parallel Monte-Carlo runs are
/// reproducible independent of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`. Distinct (master, index) pairs map
/// to distinct streams with overwhelming probability.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x51ed2701a9e5a3c5ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace acv
