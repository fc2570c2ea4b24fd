#pragma once

#include <cstdint>
#include <random>

namespace milnor {

using Seed = std::uint64_t;

/// splitmix64 finalizer; derives independent per-trial seeds from (seed, index).
constexpr Seed mix_seed(Seed seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(Seed seed, std::uint64_t index = 0) {
  return std::mt19937_64(mix_seed(seed, index));
}

/// Uniform double in [lo, hi) from raw engine output. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace milnor
