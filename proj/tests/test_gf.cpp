#include "dske/gf256.hpp"
#include "dske/gf64.hpp"

#include <cstdint>
#include <random>

#include "doctest.h"
#include "dske/error.hpp"

using namespace dske;

namespace {

// Independent oracle: carry-less shift-and-add multiply, reduced bit by bit
// against the same polynomial 0x11B.
std::uint8_t naive_mul8(std::uint8_t a, std::uint8_t b) {
  std::uint16_t acc = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & (1 << i)) acc ^= static_cast<std::uint16_t>(a) << i;
  }
  for (int bit = 15; bit >= 8; --bit) {
    if (acc & (1u << bit)) acc ^= static_cast<std::uint16_t>(gf256::kReductionPoly) << (bit - 8);
  }
  return static_cast<std::uint8_t>(acc);
}

// Same idea in GF(2^64): schoolbook carry-less multiply over __uint128_t.
std::uint64_t naive_mul64(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 acc = 0;
  for (int i = 0; i < 64; ++i) {
    if (b & (1ULL << i)) acc ^= static_cast<unsigned __int128>(a) << i;
  }
  const unsigned __int128 poly =
      (static_cast<unsigned __int128>(1) << 64) | gf64::kReductionLow;
  for (int bit = 127; bit >= 64; --bit) {
    if ((acc >> bit) & 1) acc ^= poly << (bit - 64);
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

TEST_CASE("byte field addition is xor") {
  CHECK(gf256::add(0x00, 0x5A) == 0x5A);
  CHECK(gf256::add(0x5A, 0x5A) == 0x00);
  CHECK(gf256::add(0x0F, 0xF0) == 0xFF);
}

TEST_CASE("byte field multiplication reference points") {
  CHECK(gf256::mul(0x01, 0xC3) == 0xC3);
  CHECK(gf256::mul(0x02, 0x80) == 0x1B);
  CHECK(gf256::mul(0x53, 0xCA) == 0x01);
}

TEST_CASE("byte field multiplication matches the naive oracle exhaustively") {
  for (int a = 0; a < 256; ++a) {
    for (int b = 0; b < 256; ++b) {
      REQUIRE(gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) ==
              naive_mul8(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)));
    }
  }
}

TEST_CASE("byte field inversion") {
  CHECK(gf256::inv(0x01) == 0x01);
  CHECK(gf256::inv(0x53) == 0xCA);
  CHECK_THROWS_AS(gf256::inv(0x00), DskeError);
  // Brute-force check of the specific pair.
  int found = 0;
  for (int b = 1; b < 256; ++b) {
    if (naive_mul8(0x53, static_cast<std::uint8_t>(b)) == 1) {
      ++found;
      CHECK(b == 0xCA);
    }
  }
  CHECK(found == 1);
}

TEST_CASE("every nonzero byte has a working inverse") {
  for (int a = 1; a < 256; ++a) {
    CHECK(gf256::mul(static_cast<std::uint8_t>(a), gf256::inv(static_cast<std::uint8_t>(a))) ==
          0x01);
  }
}

TEST_CASE("byte field laws over random triples") {
  std::mt19937_64 rng(0xF1E1D);
  for (int i = 0; i < 100000; ++i) {
    auto a = static_cast<std::uint8_t>(rng());
    auto b = static_cast<std::uint8_t>(rng());
    auto c = static_cast<std::uint8_t>(rng());
    REQUIRE(gf256::mul(a, b) == gf256::mul(b, a));
    REQUIRE(gf256::mul(gf256::mul(a, b), c) == gf256::mul(a, gf256::mul(b, c)));
    REQUIRE(gf256::mul(a, gf256::add(b, c)) ==
            gf256::add(gf256::mul(a, b), gf256::mul(a, c)));
  }
}

TEST_CASE("tag field reference points") {
  std::uint64_t v = 0xDEADBEEFCAFEF00DULL;
  CHECK(gf64::mul(1, v) == v);
  CHECK(gf64::mul(v, 0) == 0);
  // x^63 * x = x^64 = the reduction tail.
  CHECK(gf64::mul(1ULL << 63, 2) == 0x1B);
}

TEST_CASE("tag field multiplication matches the naive oracle") {
  std::mt19937_64 rng(0xBEEF);
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t a = rng();
    std::uint64_t b = rng();
    REQUIRE(gf64::mul(a, b) == naive_mul64(a, b));
  }
  // Degenerate corners.
  CHECK(gf64::mul(~0ULL, ~0ULL) == naive_mul64(~0ULL, ~0ULL));
  CHECK(gf64::mul(1ULL << 63, 1ULL << 63) == naive_mul64(1ULL << 63, 1ULL << 63));
}

TEST_CASE("tag field laws over random triples") {
  std::mt19937_64 rng(0x5EED);
  for (int i = 0; i < 100000; ++i) {
    std::uint64_t a = rng(), b = rng(), c = rng();
    REQUIRE(gf64::mul(a, b) == gf64::mul(b, a));
    REQUIRE(gf64::mul(gf64::mul(a, b), c) == gf64::mul(a, gf64::mul(b, c)));
    REQUIRE(gf64::mul(a, b ^ c) == (gf64::mul(a, b) ^ gf64::mul(a, c)));
  }
}
