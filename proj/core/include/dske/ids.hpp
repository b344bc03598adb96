#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <string>

#include "dske/bytes.hpp"

namespace dske {

// Opaque 16-byte party identifier. Human-readable names are stored as
// zero-padded ASCII so that logs stay legible.
struct PartyId {
  std::array<std::uint8_t, 16> bytes{};

  auto operator<=>(const PartyId&) const = default;

  static PartyId from_name(const std::string& name) {
    PartyId id;
    std::size_t n = name.size() < 16 ? name.size() : 16;
    std::memcpy(id.bytes.data(), name.data(), n);
    return id;
  }

  // Renders as the original name when printable, hex otherwise.
  std::string display() const {
    std::size_t len = 0;
    while (len < 16 && bytes[len] != 0) ++len;
    bool printable = len > 0;
    for (std::size_t i = 0; i < len; ++i) {
      if (bytes[i] < 0x20 || bytes[i] > 0x7E) printable = false;
    }
    for (std::size_t i = len; i < 16; ++i) {
      if (bytes[i] != 0) printable = false;
    }
    if (printable) return std::string(bytes.begin(), bytes.begin() + len);
    return to_hex(ByteView(bytes.data(), bytes.size()));
  }
};

// Key identifier: random nonce chosen by the initiator plus a running index.
// Binds every message of one agreement together and prevents cross-run mixing.
struct KeyId {
  std::array<std::uint8_t, 16> nonce{};
  std::uint64_t index = 0;

  auto operator<=>(const KeyId&) const = default;

  std::string display() const {
    return to_hex(ByteView(nonce.data(), 4)) + "/" + std::to_string(index);
  }
};

}  // namespace dske
