#include "dske/bytes.hpp"

#include "dske/error.hpp"

namespace dske {

namespace {
int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string to_hex(ByteView data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) {
    throw DskeError(ErrorCode::truncated, "odd-length hex string");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw DskeError(ErrorCode::truncated, "invalid hex digit");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

void xor_into(std::span<std::uint8_t> out, ByteView in) {
  if (out.size() != in.size()) {
    throw DskeError(ErrorCode::length_mismatch, "xor_into size mismatch");
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= in[i];
}

Bytes xor_bytes(ByteView a, ByteView b) {
  if (a.size() != b.size()) {
    throw DskeError(ErrorCode::length_mismatch, "xor_bytes size mismatch");
  }
  Bytes out(a.begin(), a.end());
  xor_into(out, b);
  return out;
}

std::uint64_t digest64(ByteView data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dske
