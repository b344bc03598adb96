#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dske {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
Bytes from_hex(const std::string& hex);  // throws DskeError(truncated) on bad input

// out[i] ^= in[i]; sizes must match.
void xor_into(std::span<std::uint8_t> out, ByteView in);
Bytes xor_bytes(ByteView a, ByteView b);

// FNV-1a, used for short human-readable digests of agreed keys in reports.
std::uint64_t digest64(ByteView data);

}  // namespace dske
