#pragma once

#include <cstdint>
#include <random>

#include "tracenorm/vector.hpp"

namespace tracenorm {

/// Uniform double in [lo, hi) from the top 53 bits of a 64-bit Mersenne twister draw, so values
/// do not depend on the standard library's distribution implementation.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline Vector uniform_vector(Index n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

}  // namespace tracenorm
