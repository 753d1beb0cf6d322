#pragma once

#include <cstdint>

#include "schedlift/rational.hpp"

namespace schedlift {

// SplitMix64. One fixed generator so that seeded artifacts reproduce
// bit-for-bit on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw from {0, ..., bound - 1}; bound must be positive. Uses
  // rejection so the distribution is exact.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw >= limit);
    return draw % bound;
  }

  // True with probability exactly p (clamped to [0, 1]): draws a 64-bit word
  // u and tests u < p * 2^64 in integer arithmetic.
  bool coin(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const std::uint64_t u = next();
    const BigInt lhs = BigInt(u) * boost::multiprecision::denominator(p);
    const BigInt rhs =
        boost::multiprecision::numerator(p) * (BigInt(1) << 64);
    return lhs < rhs;
  }

 private:
  std::uint64_t state_;
};

}  // namespace schedlift
