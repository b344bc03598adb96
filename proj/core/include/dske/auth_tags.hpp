#pragma once

#include <compare>
#include <cstdint>

#include "dske/bytes.hpp"
#include "dske/gf256.hpp"
#include "dske/gf64.hpp"

// One-time message authentication: the message is split into field-sized
// blocks, a final block carrying the bit length is appended, the blocks are
// folded through Horner evaluation at a secret point, and the result is
// masked with a secret one-time pad. A key authenticates exactly one message;
// key material always comes out of a pre-shared table and is never reused.
//
// With an L-block input (length block included) two distinct messages collide
// for at most L out of 2^r evaluation points, so a forgery passes with
// probability at most L * 2^-r. The length block has the lowest evaluation
// power all to itself, which kills extension and truncation games.

namespace dske {

inline constexpr std::size_t kTagKeyBytes = 16;  // eval point + mask
inline constexpr std::size_t kTagBytes = 8;

struct Tag {
  std::uint64_t value = 0;

  auto operator<=>(const Tag&) const = default;

  void to_bytes(std::uint8_t out[kTagBytes]) const {
    for (std::size_t i = 0; i < kTagBytes; ++i) {
      out[i] = static_cast<std::uint8_t>(value >> (8 * (kTagBytes - 1 - i)));
    }
  }
  static Tag from_bytes(const std::uint8_t in[kTagBytes]) {
    Tag t;
    for (std::size_t i = 0; i < kTagBytes; ++i) {
      t.value = (t.value << 8) | in[i];
    }
    return t;
  }
};

struct TagKey {
  std::uint64_t eval_point = 0;
  std::uint64_t mask = 0;

  // Key layout in table material: eval point first, mask second, big-endian.
  static TagKey from_bytes(ByteView key);  // requires key.size() == kTagKeyBytes
};

Tag compute_tag(const TagKey& key, ByteView message);

// Comparison accumulates over all bytes instead of bailing at the first
// mismatch.
bool verify_tag(const TagKey& key, ByteView message, Tag tag);

// --- generic construction ---------------------------------------------------
//
// The same scheme over an arbitrary binary field. The production tag above is
// PolyTag<TagField64>; tests instantiate PolyTag<TagField8> to make forgery
// statistics observable at width r = 8.

struct TagField64 {
  using Elem = std::uint64_t;
  static constexpr std::size_t block_bytes = 8;
  static Elem mul(Elem a, Elem b) { return gf64::mul(a, b); }
};

struct TagField8 {
  using Elem = std::uint8_t;
  static constexpr std::size_t block_bytes = 1;
  static Elem mul(Elem a, Elem b) { return gf256::mul(a, b); }
};

template <class Field>
struct PolyTag {
  using Elem = typename Field::Elem;

  static Elem compute(Elem eval_point, Elem mask, ByteView message) {
    constexpr std::size_t bb = Field::block_bytes;
    Elem acc = 0;
    std::size_t i = 0;
    while (i < message.size()) {
      Elem block = 0;
      for (std::size_t j = 0; j < bb; ++j) {
        std::uint8_t byte = (i + j < message.size()) ? message[i + j] : 0;
        block = static_cast<Elem>((block << 8) | byte);
      }
      acc = Field::mul(static_cast<Elem>(acc ^ block), eval_point);
      i += bb;
    }
    Elem length_block = static_cast<Elem>(message.size() * 8);  // bits, mod 2^r
    acc = Field::mul(static_cast<Elem>(acc ^ length_block), eval_point);
    return static_cast<Elem>(acc ^ mask);
  }
};

}  // namespace dske
