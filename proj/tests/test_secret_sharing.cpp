#include "dske/secret_sharing.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "doctest.h"
#include "dske/error.hpp"
#include "dske/gf256.hpp"

using namespace dske;

namespace {

Share share(std::uint8_t x, std::initializer_list<int> data) {
  Share s;
  s.x = x;
  for (int v : data) s.data.push_back(static_cast<std::uint8_t>(v));
  return s;
}

// Brute-force oracle for one-byte degree-1 polynomials: find every (a0, a1)
// that passes through the given points.
struct Line {
  std::uint8_t a0, a1;
};
std::vector<Line> lines_through(std::uint8_t x1, std::uint8_t y1, std::uint8_t x2,
                                std::uint8_t y2) {
  std::vector<Line> out;
  for (int a0 = 0; a0 < 256; ++a0) {
    for (int a1 = 0; a1 < 256; ++a1) {
      auto eval = [&](std::uint8_t x) {
        return gf256::add(static_cast<std::uint8_t>(a0),
                          gf256::mul(static_cast<std::uint8_t>(a1), x));
      };
      if (eval(x1) == y1 && eval(x2) == y2) {
        out.push_back({static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1)});
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("completing a 2-of-3 line matches the brute-force polynomial") {
  auto lines = lines_through(1, 0x2B, 2, 0x28);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].a0 == 0x2A);
  CHECK(lines[0].a1 == 0x01);

  auto [all, secret] = complete_shares({3, 2, SchemeKind::shamir},
                                       {share(1, {0x2B}), share(2, {0x28})});
  REQUIRE(all.size() == 3);
  CHECK(all[0] == share(1, {0x2B}));
  CHECK(all[1] == share(2, {0x28}));
  CHECK(all[2] == share(3, {0x29}));
  CHECK(secret.secret == Bytes{0x2A});
}

TEST_CASE("xor completion is plain xor") {
  auto [all, secret] =
      complete_shares({2, 2, SchemeKind::xor_all}, {share(1, {0x0F}), share(2, {0xF0})});
  CHECK(secret.secret == Bytes{0xFF});
  CHECK(all.size() == 2);
}

TEST_CASE("1-of-1 is the constant polynomial") {
  Bytes data = {0xDE, 0xAD, 0xBE, 0xEF};
  auto [all, secret] = complete_shares({1, 1, SchemeKind::shamir}, {Share{1, data}});
  CHECK(secret.secret == data);
  CHECK(all.size() == 1);
  CHECK(all[0].data == data);
}

TEST_CASE("reconstruct from the other point pair") {
  SecretBundle got = reconstruct({3, 2, SchemeKind::shamir}, {share(2, {0x28}), share(3, {0x29})});
  CHECK(got.secret == Bytes{0x2A});
}

TEST_CASE("xor reconstruct cancels equal shares") {
  SecretBundle got =
      reconstruct({2, 2, SchemeKind::xor_all}, {share(1, {0xAA}), share(2, {0xAA})});
  CHECK(got.secret == Bytes{0x00});
}

TEST_CASE("below-threshold reconstruction is refused") {
  CHECK_THROWS_WITH_AS(reconstruct({3, 2, SchemeKind::shamir}, {share(2, {0x28})}),
                       "InsufficientShares", DskeError);
}

TEST_CASE("derived shares predict the third coordinate") {
  auto others = derive_other_shares({3, 2, SchemeKind::shamir},
                                    {share(1, {0x2B}), share(2, {0x28})});
  REQUIRE(others.size() == 3);
  CHECK(others[2] == share(3, {0x29}));
}

TEST_CASE("xor derive returns the input unchanged") {
  std::vector<Share> input = {share(1, {0x01, 0x02}), share(2, {0x03, 0x04})};
  CHECK(derive_other_shares({2, 2, SchemeKind::xor_all}, input) == input);
}

TEST_CASE("parameter and share validation") {
  CHECK_THROWS_AS(complete_shares({3, 2, SchemeKind::shamir}, {share(1, {0x00})}), DskeError);
  CHECK_THROWS_AS(
      complete_shares({3, 2, SchemeKind::shamir}, {share(1, {0x00}), share(1, {0x01})}),
      DskeError);  // duplicate coordinate
  CHECK_THROWS_AS(
      complete_shares({3, 2, SchemeKind::shamir}, {share(1, {0x00}), share(2, {0x01, 0x02})}),
      DskeError);  // length mismatch
  CHECK_THROWS_AS(
      complete_shares({3, 2, SchemeKind::shamir}, {share(0, {0x00}), share(2, {0x01})}),
      DskeError);  // reserved coordinate
  CHECK_THROWS_AS(
      complete_shares({3, 2, SchemeKind::shamir}, {share(1, {0x00}), share(4, {0x01})}),
      DskeError);  // coordinate beyond n
  CHECK_THROWS_AS(complete_shares({3, 2, SchemeKind::xor_all},
                                  {share(1, {0x00}), share(2, {0x01})}),
                  DskeError);  // xor needs k == n
  CHECK_THROWS_AS(derive_other_shares({2, 2, SchemeKind::xor_all},
                                      {share(1, {0x01, 0x02}), share(2, {0x03})}),
                  DskeError);  // length mismatch
}

TEST_CASE("round trip through every subset") {
  std::mt19937_64 rng(0xC0FFEE);
  for (int iteration = 0; iteration < 60; ++iteration) {
    std::uint16_t n = static_cast<std::uint16_t>(1 + rng() % 8);
    std::uint16_t k = static_cast<std::uint16_t>(1 + rng() % n);
    std::size_t len = 1 + rng() % 16;
    SchemeParams params{n, k, SchemeKind::shamir};

    std::vector<Share> fixed;
    std::vector<std::uint8_t> coords(n);
    for (std::uint16_t i = 0; i < n; ++i) coords[i] = static_cast<std::uint8_t>(i + 1);
    for (std::uint16_t i = 0; i < k; ++i) {
      Share s;
      // Random distinct coordinates from 1..n, not necessarily the first k.
      std::size_t pick = rng() % (n - i);
      s.x = coords[pick];
      coords.erase(coords.begin() + pick);
      s.data.resize(len);
      for (auto& b : s.data) b = static_cast<std::uint8_t>(rng());
      fixed.push_back(std::move(s));
    }

    auto [all, secret] = complete_shares(params, fixed);
    REQUIRE(all.size() == n);

    // Every k-subset reconstructs the same secret.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<Share> subset;
      for (std::size_t i : idx) subset.push_back(all[i]);
      REQUIRE(reconstruct(params, subset).secret == secret.secret);

      std::size_t i = k;
      bool advanced = false;
      while (i-- > 0) {
        if (idx[i] != i + n - k) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }

    // Derived shares agree with the completed set.
    std::vector<Share> prefix(all.begin(), all.begin() + k);
    CHECK(derive_other_shares(params, prefix) == all);
  }
}

TEST_CASE("round trip at larger n with sampled subsets") {
  std::mt19937_64 rng(0xFACADE);
  for (std::uint16_t n : {12, 17, 20}) {
    std::uint16_t k = static_cast<std::uint16_t>(2 + rng() % (n - 1));
    SchemeParams params{n, k, SchemeKind::shamir};
    std::vector<Share> fixed;
    for (std::uint16_t i = 0; i < k; ++i) {
      Share s;
      s.x = static_cast<std::uint8_t>(i + 1);
      s.data.resize(64);
      for (auto& b : s.data) b = static_cast<std::uint8_t>(rng());
      fixed.push_back(std::move(s));
    }
    auto [all, secret] = complete_shares(params, fixed);
    for (int trial = 0; trial < 16; ++trial) {
      std::vector<Share> pool = all;
      std::vector<Share> subset;
      for (std::uint16_t i = 0; i < k; ++i) {
        std::size_t pick = rng() % pool.size();
        subset.push_back(pool[pick]);
        pool.erase(pool.begin() + pick);
      }
      REQUIRE(reconstruct(params, subset).secret == secret.secret);
    }
  }
}

TEST_CASE("one fixed share plus an enumerated share hits every secret once") {
  // 2-of-3 over a single byte: with the first share pinned, the secret is a
  // bijection of the second share's value. One share alone determines nothing.
  SchemeParams params{3, 2, SchemeKind::shamir};
  const std::uint8_t pinned = 0x5D;
  std::array<int, 256> histogram{};
  for (int v = 0; v < 256; ++v) {
    auto [all, secret] =
        complete_shares(params, {share(1, {pinned}), share(2, {v})});
    ++histogram[secret.secret[0]];
  }
  for (int count : histogram) CHECK(count == 1);
}

TEST_CASE("xor and polynomial schemes coincide only in the 1-of-1 case") {
  Bytes data = {0x77, 0x01};
  auto [xa, xs] = complete_shares({1, 1, SchemeKind::xor_all}, {Share{1, data}});
  auto [sa, ss] = complete_shares({1, 1, SchemeKind::shamir}, {Share{1, data}});
  CHECK(xs.secret == ss.secret);

  auto [xa2, xs2] = complete_shares({2, 2, SchemeKind::xor_all},
                                    {share(1, {0x10}), share(2, {0x20})});
  auto [sa2, ss2] = complete_shares({2, 2, SchemeKind::shamir},
                                    {share(1, {0x10}), share(2, {0x20})});
  CHECK(xs2.secret != ss2.secret);
}

TEST_CASE("secret bundle splits into tag key and key bits") {
  SecretBundle bundle{Bytes{1, 2, 3, 4, 5}};
  auto tag_key = bundle.tag_key(2);
  auto key_bits = bundle.key_bits(2);
  CHECK(Bytes(tag_key.begin(), tag_key.end()) == Bytes{1, 2});
  CHECK(Bytes(key_bits.begin(), key_bits.end()) == Bytes{3, 4, 5});
}
