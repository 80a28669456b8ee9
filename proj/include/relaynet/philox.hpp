// Counter-based Philox4x32-10 generator.
//
// Every random value is a pure function of (key, counter), so any partition of
// the counter space over worker threads reproduces the single-threaded stream.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace relaynet {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr int kRounds = 10;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int r = 0; r < kRounds; ++r) {
      if (r > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;

  static constexpr Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

// Uniform on the open interval (0, 1) from the top 52 of 64 random bits.
inline double open_unit_interval(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Identifies one complex Gaussian draw: entry (row, col) of the channel
/// matrix for hop `hop` at ergodic sample `draw`, under run seed `seed`.
struct DrawCoordinate {
  std::uint64_t seed = 0;
  std::uint32_t hop = 0;
  std::uint64_t draw = 0;
  std::uint32_t row = 0;
  std::uint32_t col = 0;
};

/// Circularly symmetric CN(0, 1) sample; real and imaginary parts each have
/// variance 1/2. Box-Muller on one Philox block.
inline std::complex<double> complex_gaussian(const DrawCoordinate& at) {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(at.draw),
                                static_cast<std::uint32_t>(at.draw >> 32), at.hop,
                                (at.row << 16) | (at.col & 0xFFFFu)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(at.seed),
                            static_cast<std::uint32_t>(at.seed >> 32)};
  const auto out = Philox4x32::generate(ctr, key);
  const double u1 = open_unit_interval(out[0], out[1]);
  const double u2 = open_unit_interval(out[2], out[3]);
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace relaynet
