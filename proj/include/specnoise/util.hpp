#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace specnoise {

enum class RunMode { serial, parallel };

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Splittable stream keyed by (seed, stream index). Every consumer of
// randomness in the library derives its generator through this function,
// which makes results reproducible across platforms and thread counts.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(~stream)));
}

// Uniform in [0,1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Inverse-CDF exponential draw. 1-u is in (0,1], so log1p is safe.
inline double exponential_draw(std::mt19937_64& g, double rate) {
  return -std::log1p(-uniform01(g)) / rate;
}

// Deterministic pairwise summation; independent of thread count because it
// runs over an index-ordered buffer.
inline double pairwise_sum(const double* a, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}

}  // namespace specnoise
