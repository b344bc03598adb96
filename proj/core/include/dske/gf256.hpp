#pragma once

#include <array>
#include <cstdint>

#include "dske/error.hpp"

// Arithmetic in GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1
// (0x11B). Addition is XOR; multiplication goes through log/exp tables over
// the generator 0x03. All tables are built at compile time.

namespace dske::gf256 {

inline constexpr std::uint16_t kReductionPoly = 0x11B;

namespace detail {

constexpr std::uint8_t xtime(std::uint8_t a) {
  return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? (kReductionPoly & 0xFF) : 0));
}

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables build_tables() {
  Tables t{};
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    // multiply by the generator 0x03 = x + 1
    x = static_cast<std::uint8_t>(xtime(x) ^ x);
  }
  for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Tables kTables = build_tables();

}  // namespace detail

constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) {
  return static_cast<std::uint8_t>(a ^ b);
}

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return detail::kTables.exp[detail::kTables.log[a] + detail::kTables.log[b]];
}

inline std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw DskeError(ErrorCode::zero_inverse, "no inverse of 0 in GF(2^8)");
  return detail::kTables.exp[255 - detail::kTables.log[a]];
}

constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw DskeError(ErrorCode::zero_inverse, "division by 0 in GF(2^8)");
  if (a == 0) return 0;
  return detail::kTables.exp[255 + detail::kTables.log[a] - detail::kTables.log[b]];
}

// 256-byte row of products c*b for a fixed scalar c; the workhorse of the
// share transform inner loops.
inline void fill_mul_row(std::uint8_t c, std::uint8_t* row) {
  for (int b = 0; b < 256; ++b) row[b] = mul(c, static_cast<std::uint8_t>(b));
}

}  // namespace dske::gf256
