#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "relaynet/philox.hpp"

using relaynet::complex_gaussian;
using relaynet::DrawCoordinate;
using relaynet::Philox4x32;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST_CASE("philox4x32-10 matches the published known-answer vectors") {
  SECTION("zero counter, zero key") {
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    CHECK(out == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  }
  SECTION("all-ones counter and key") {
    const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                          {0xffffffffu, 0xffffffffu});
    CHECK(out == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  }
  SECTION("digits of pi") {
    const auto out = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                          {0xa4093822u, 0x299f31d0u});
    CHECK(out == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }
}

TEST_CASE("open_unit_interval never returns the endpoints") {
  CHECK(relaynet::open_unit_interval(0, 0) > 0.0);
  CHECK(relaynet::open_unit_interval(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("gaussian draws are keyed by every coordinate") {
  const DrawCoordinate base{42, 0, 7, 1, 2};
  const auto ref = complex_gaussian(base);
  CHECK(complex_gaussian(base) == ref);

  std::set<std::pair<double, double>> seen{{ref.real(), ref.imag()}};
  for (auto vary : {DrawCoordinate{43, 0, 7, 1, 2}, DrawCoordinate{42, 1, 7, 1, 2},
                    DrawCoordinate{42, 0, 8, 1, 2}, DrawCoordinate{42, 0, 7, 2, 1},
                    DrawCoordinate{42, 0, 7, 1, 3}, DrawCoordinate{42, 0, 7ull << 32, 1, 2}}) {
    const auto z = complex_gaussian(vary);
    CHECK(seen.insert({z.real(), z.imag()}).second);
  }
}

TEST_CASE("gaussian components have mean 0 and variance 1/2") {
  constexpr int n = 200000;
  double sr = 0, si = 0, sr2 = 0, si2 = 0, cross = 0;
  for (int d = 0; d < n; ++d) {
    const auto z = complex_gaussian({9, 0, static_cast<std::uint64_t>(d), 0, 0});
    sr += z.real();
    si += z.imag();
    sr2 += z.real() * z.real();
    si2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  // Standard errors: mean ~ sqrt(0.5/n) = 1.6e-3, second moments ~ 0.5*sqrt(2/n) = 1.6e-3.
  CHECK(std::abs(sr / n) < 5 * 1.6e-3);
  CHECK(std::abs(si / n) < 5 * 1.6e-3);
  CHECK(std::abs(sr2 / n - 0.5) < 5 * 1.6e-3);
  CHECK(std::abs(si2 / n - 0.5) < 5 * 1.6e-3);
  CHECK(std::abs(cross / n) < 5 * 1.2e-3);
}
