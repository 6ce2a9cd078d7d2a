#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ctmc {

/// xoshiro256++ (Blackman and Vigna), a jumpable 256-bit generator.
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  /// State filled from splitmix64 of the seed.
  explicit Xoshiro256pp(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Advances by 2^128 draws.
  void jump();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

/// Per-realization random stream.
///
/// Stream i of a master seed is the seeded generator advanced by i jumps, so
/// streams are disjoint blocks of 2^128 draws and do not depend on which
/// thread runs which realization.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on (0, 1], 53 bits.
  double uniform_open_closed() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }
  /// Uniform on [0, 1), 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Inverse-CDF exponential draw, -ln(U) / rate with U in (0, 1].
  double exponential(double rate) { return -std::log(uniform_open_closed()) / rate; }

  Xoshiro256pp& engine() { return engine_; }

 private:
  Xoshiro256pp engine_;
};

}  // namespace ctmc
