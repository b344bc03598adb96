#include "dske/auth_tags.hpp"

#include "dske/error.hpp"

namespace dske {

TagKey TagKey::from_bytes(ByteView key) {
  if (key.size() != kTagKeyBytes) {
    throw DskeError(ErrorCode::length_mismatch, "tag key must be 16 bytes");
  }
  TagKey k;
  for (std::size_t i = 0; i < 8; ++i) k.eval_point = (k.eval_point << 8) | key[i];
  for (std::size_t i = 8; i < 16; ++i) k.mask = (k.mask << 8) | key[i];
  return k;
}

Tag compute_tag(const TagKey& key, ByteView message) {
  return Tag{PolyTag<TagField64>::compute(key.eval_point, key.mask, message)};
}

bool verify_tag(const TagKey& key, ByteView message, Tag tag) {
  Tag expected = compute_tag(key, message);
  std::uint8_t a[kTagBytes], b[kTagBytes];
  expected.to_bytes(a);
  tag.to_bytes(b);
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < kTagBytes; ++i) diff |= static_cast<std::uint8_t>(a[i] ^ b[i]);
  return diff == 0;
}

}  // namespace dske
