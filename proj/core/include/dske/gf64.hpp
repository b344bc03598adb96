#pragma once

#include <cstdint>

// Arithmetic in GF(2^64) with reduction polynomial x^64 + x^4 + x^3 + x + 1.
// Bit i of a word is the coefficient of x^i. Used as the carrier field of the
// tag scheme; throughput matters less than in gf256, a windowed carry-less
// multiply is plenty.

namespace dske::gf64 {

inline constexpr std::uint64_t kReductionLow = 0x1B;  // x^4 + x^3 + x + 1

namespace detail {

struct U128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

// Carry-less 64x64 -> 128 multiply, 4-bit window.
inline U128 clmul(std::uint64_t a, std::uint64_t b) {
  // Precompute a * w for every 4-bit w.
  std::uint64_t lo_tab[16];
  std::uint64_t hi_tab[16];
  lo_tab[0] = 0;
  hi_tab[0] = 0;
  for (int w = 1; w < 16; ++w) {
    int bit = __builtin_ctz(static_cast<unsigned>(w));
    int base = w & (w - 1);  // w with its lowest set bit cleared
    lo_tab[w] = lo_tab[base] ^ (a << bit);
    hi_tab[w] = hi_tab[base] ^ (bit ? (a >> (64 - bit)) : 0);
  }
  U128 acc;
  for (int shift = 60; shift >= 0; shift -= 4) {
    // acc <<= 4
    acc.hi = (acc.hi << 4) | (acc.lo >> 60);
    acc.lo <<= 4;
    int w = static_cast<int>((b >> shift) & 0xF);
    acc.lo ^= lo_tab[w];
    acc.hi ^= hi_tab[w];
  }
  return acc;
}

}  // namespace detail

constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a ^ b; }

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  detail::U128 p = detail::clmul(a, b);
  // Reduce p.hi * x^64 by two folds; the reduction polynomial tail has
  // degree 4, so the first fold spills at most 4 bits.
  std::uint64_t h = p.hi;
  std::uint64_t spill = (h >> 60) ^ (h >> 61) ^ (h >> 63);
  std::uint64_t folded = (h << 4) ^ (h << 3) ^ (h << 1) ^ h;
  folded ^= (spill << 4) ^ (spill << 3) ^ (spill << 1) ^ spill;
  return p.lo ^ folded;
}

}  // namespace dske::gf64
