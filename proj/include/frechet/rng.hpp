#pragma once

#include <cmath>
#include <cstdint>

#include "frechet/common.hpp"

namespace frechet {

// SplitMix64 output mixer. Constants are Steele/Lea/Flood's published ones:
// increment 0x9E3779B97F4A7C15 (2^64/phi), multipliers 0xBF58476D1CE4E5B9
// and 0x94D049BB133111EB, shifts 30/27/31.
inline std::uint64_t splitmix_mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream seed for (root, replicate, index). Each coordinate is salted with a
// fixed pi-digit constant and folded through the mixer, so distinct triples
// give statistically independent streams and the mapping is frozen: changing
// thread counts or evaluation order cannot change any draw.
inline std::uint64_t derive_stream(std::uint64_t root, std::uint64_t replicate,
                                   std::uint64_t index) {
  std::uint64_t h = splitmix_mix(root);
  h = splitmix_mix(h ^ splitmix_mix(replicate ^ 0x243F6A8885A308D3ull));
  h = splitmix_mix(h ^ splitmix_mix(index ^ 0x13198A2E03707344ull));
  return h;
}

// Counter-based SplitMix64 stream with Box-Muller normals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]: never 0, safe under log().
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vec normal_vec(int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  // Rademacher sign.
  double sign() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Van der Corput radical inverse; Halton point = (inverse base p_1, ..., p_k).
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

inline constexpr std::uint64_t kHaltonPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                                  23, 29, 31, 37, 41, 43, 47, 53};

// Deterministic quasi-uniform direction on S^{d-1}: Box-Muller applied to
// consecutive Halton coordinates of point `i` (1-based to skip the origin).
// first_prime skips the leading bases so callers can reserve them (e.g. for a
// radius coordinate) without correlating against the direction.
inline Vec halton_direction(std::uint64_t i, int d, int first_prime = 0) {
  const int pairs = (d + 1) / 2;
  Vec g(2 * pairs);
  for (int p = 0; p < pairs; ++p) {
    double u1 = radical_inverse(i, kHaltonPrimes[(first_prime + 2 * p) % 16]);
    double u2 = radical_inverse(i, kHaltonPrimes[(first_prime + 2 * p + 1) % 16]);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    g[2 * p] = r * std::cos(a);
    g[2 * p + 1] = r * std::sin(a);
  }
  Vec dir = g.head(d);
  const double n = dir.norm();
  if (n < 1e-12) {
    dir.setZero();
    dir[0] = 1.0;
    return dir;
  }
  return dir / n;
}

}  // namespace frechet
