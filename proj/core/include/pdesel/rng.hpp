#pragma once

#include <cmath>
#include <random>

namespace pdesel::rng {

/// Uniform draw in [0, 1) built directly on the mt19937_64 stream. All
/// randomness in the toolkit goes through these helpers (or raw modulo
/// reduction) instead of std distributions, whose outputs differ between
/// standard libraries; seeds therefore reproduce bit-for-bit everywhere.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Standard normal draw (Box-Muller, cosine branch).
inline double normal(std::mt19937_64& g) {
  const double u1 = 1.0 - uniform01(g);  // (0, 1], keeps the log finite
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace pdesel::rng
