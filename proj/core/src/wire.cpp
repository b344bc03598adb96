#include "dske/wire.hpp"

#include <cstring>
#include <limits>

#include "dske/error.hpp"

namespace dske::wire {

namespace {

enum : std::uint8_t {
  kTypeKeyRequest = 0x01,
  kTypeKeyInstruction = 0x02,
  kTypeIdentityQuery = 0x03,
  kTypeIdentityResponse = 0x04,
  kTypeNegotiation = 0x05,
  kTypeFinalize = 0x06,
};

// Anything bigger than this in a declared length is treated as hostile.
constexpr std::uint64_t kMaxFieldBytes = 1ULL << 30;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
  void party(const PartyId& id) { raw(ByteView(id.bytes.data(), id.bytes.size())); }
  void key_id(const KeyId& id) {
    raw(ByteView(id.nonce.data(), id.nonce.size()));
    u64(id.index);
  }
  void slice(const SliceRef& s) {
    u64(s.table_id);
    u64(s.start);
    u64(s.length);
  }
  void tag(const Tag& t) {
    std::uint8_t buf[kTagBytes];
    t.to_bytes(buf);
    raw(ByteView(buf, kTagBytes));
  }

  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
    return v;
  }
  Bytes bytes(std::size_t n) {
    auto b = take(n);
    return Bytes(b.begin(), b.end());
  }
  PartyId party() {
    PartyId id;
    auto b = take(16);
    std::memcpy(id.bytes.data(), b.data(), 16);
    return id;
  }
  KeyId key_id() {
    KeyId id;
    auto b = take(16);
    std::memcpy(id.nonce.data(), b.data(), 16);
    id.index = u64();
    return id;
  }
  SliceRef slice() {
    SliceRef s;
    s.table_id = u64();
    s.start = u64();
    s.length = u64();
    if (s.length > kMaxFieldBytes) throw DskeError(ErrorCode::field_overflow, "slice length");
    return s;
  }
  Tag tag() {
    auto b = take(kTagBytes);
    return Tag::from_bytes(b.data());
  }
  std::size_t checked_count(std::uint64_t declared) {
    if (declared > remaining()) throw DskeError(ErrorCode::truncated, "declared length");
    return static_cast<std::size_t>(declared);
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  void expect_done() const {
    if (pos_ != data_.size()) throw DskeError(ErrorCode::field_overflow, "trailing bytes");
  }

 private:
  ByteView take(std::size_t n) {
    if (remaining() < n) throw DskeError(ErrorCode::truncated);
    ByteView view = data_.subspan(pos_, n);
    pos_ += n;
    return view;
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

std::uint8_t flag(bool present) { return present ? 1 : 0; }

bool read_flag(Reader& r) {
  std::uint8_t v = r.u8();
  if (v > 1) throw DskeError(ErrorCode::field_overflow, "presence flag");
  return v == 1;
}

Bytes encode_body(const Message& message) {
  Writer w;
  if (const auto* m = std::get_if<KeyRequestMessage>(&message)) {
    w.u8(kTypeKeyRequest);
    w.party(m->sender);
    w.party(m->receiver);
    w.key_id(m->key_id);
    w.u16(m->n);
    w.u16(m->k);
    if (m->x_coords.size() != m->n) {
      throw DskeError(ErrorCode::field_overflow, "x coordinate count");
    }
    w.raw(ByteView(m->x_coords));
    w.u8(m->x_coord);
    w.slice(m->share_slice);
    w.u8(flag(m->encrypted_share.has_value()));
    if (m->encrypted_share) {
      if (m->encrypted_share->size() != m->share_slice.length) {
        throw DskeError(ErrorCode::field_overflow, "encrypted share length");
      }
      w.raw(ByteView(*m->encrypted_share));
    }
    w.u8(flag(m->key_tag.has_value()));
    if (m->key_tag) w.tag(*m->key_tag);
    w.slice(m->msg_tag_slice);
    w.tag(m->message_tag);
  } else if (const auto* m = std::get_if<KeyInstructionMessage>(&message)) {
    w.u8(kTypeKeyInstruction);
    w.party(m->hub);
    w.party(m->sender);
    w.key_id(m->key_id);
    w.u16(m->n);
    w.u16(m->k);
    w.u8(m->x_coord);
    w.slice(m->slice);
    if (m->encrypted_share.size() != m->slice.length) {
      throw DskeError(ErrorCode::field_overflow, "encrypted share length");
    }
    w.raw(ByteView(m->encrypted_share));
    w.u8(flag(m->key_tag.has_value()));
    if (m->key_tag) w.tag(*m->key_tag);
    w.slice(m->msg_tag_slice);
    w.tag(m->message_tag);
  } else if (const auto* m = std::get_if<IdentityQuery>(&message)) {
    w.u8(kTypeIdentityQuery);
    w.party(m->subject);
  } else if (const auto* m = std::get_if<IdentityResponse>(&message)) {
    w.u8(kTypeIdentityResponse);
    w.party(m->subject);
    if (m->record.size() > kMaxFieldBytes) {
      throw DskeError(ErrorCode::field_overflow, "record length");
    }
    w.u32(static_cast<std::uint32_t>(m->record.size()));
    w.raw(ByteView(m->record));
    w.slice(m->msg_tag_slice);
    w.tag(m->message_tag);
  } else if (const auto* m = std::get_if<NegotiationMessage>(&message)) {
    w.u8(kTypeNegotiation);
    w.key_id(m->key_id);
    if (m->share_tags.size() > 0xFFFF) {
      throw DskeError(ErrorCode::field_overflow, "share tag count");
    }
    w.u16(static_cast<std::uint16_t>(m->share_tags.size()));
    for (const auto& [x, t] : m->share_tags) {
      w.u8(x);
      w.tag(t);
    }
    w.tag(m->message_tag);
  } else if (const auto* m = std::get_if<FinalizeMessage>(&message)) {
    w.u8(kTypeFinalize);
    w.key_id(m->key_id);
    if (m->accepted_x.size() > 0xFFFF) {
      throw DskeError(ErrorCode::field_overflow, "accepted coordinate count");
    }
    w.u16(static_cast<std::uint16_t>(m->accepted_x.size()));
    w.raw(ByteView(m->accepted_x));
    w.tag(m->key_tag);
    w.tag(m->message_tag);
  }
  return w.take();
}

}  // namespace

Bytes encode(const Message& message) {
  Bytes body = encode_body(message);
  Bytes frame(4 + body.size());
  const std::uint32_t len = static_cast<std::uint32_t>(body.size());
  for (int i = 0; i < 4; ++i) frame[i] = static_cast<std::uint8_t>(len >> (8 * (3 - i)));
  std::memcpy(frame.data() + 4, body.data(), body.size());
  return frame;
}

Message decode(ByteView frame) {
  if (frame.size() < 5) throw DskeError(ErrorCode::truncated, "frame too short");
  std::uint32_t declared = 0;
  for (int i = 0; i < 4; ++i) declared = (declared << 8) | frame[i];
  if (frame.size() - 4 < declared) throw DskeError(ErrorCode::truncated, "incomplete frame");
  if (frame.size() - 4 > declared) throw DskeError(ErrorCode::field_overflow, "oversized frame");

  Reader r(frame.subspan(4));
  std::uint8_t type = r.u8();
  switch (type) {
    case kTypeKeyRequest: {
      KeyRequestMessage m;
      m.sender = r.party();
      m.receiver = r.party();
      m.key_id = r.key_id();
      m.n = r.u16();
      m.k = r.u16();
      m.x_coords = r.bytes(r.checked_count(m.n));
      m.x_coord = r.u8();
      m.share_slice = r.slice();
      if (read_flag(r)) {
        m.encrypted_share = r.bytes(r.checked_count(m.share_slice.length));
      }
      if (read_flag(r)) m.key_tag = r.tag();
      m.msg_tag_slice = r.slice();
      m.message_tag = r.tag();
      r.expect_done();
      return m;
    }
    case kTypeKeyInstruction: {
      KeyInstructionMessage m;
      m.hub = r.party();
      m.sender = r.party();
      m.key_id = r.key_id();
      m.n = r.u16();
      m.k = r.u16();
      m.x_coord = r.u8();
      m.slice = r.slice();
      m.encrypted_share = r.bytes(r.checked_count(m.slice.length));
      if (read_flag(r)) m.key_tag = r.tag();
      m.msg_tag_slice = r.slice();
      m.message_tag = r.tag();
      r.expect_done();
      return m;
    }
    case kTypeIdentityQuery: {
      IdentityQuery m;
      m.subject = r.party();
      r.expect_done();
      return m;
    }
    case kTypeIdentityResponse: {
      IdentityResponse m;
      m.subject = r.party();
      std::uint32_t len = 0;
      for (int i = 0; i < 4; ++i) len = (len << 8) | r.u8();
      m.record = r.bytes(r.checked_count(len));
      m.msg_tag_slice = r.slice();
      m.message_tag = r.tag();
      r.expect_done();
      return m;
    }
    case kTypeNegotiation: {
      NegotiationMessage m;
      m.key_id = r.key_id();
      std::uint16_t count = r.u16();
      if (static_cast<std::size_t>(count) * (1 + kTagBytes) > r.remaining()) {
        throw DskeError(ErrorCode::truncated, "share tag list");
      }
      m.share_tags.reserve(count);
      for (std::uint16_t i = 0; i < count; ++i) {
        std::uint8_t x = r.u8();
        Tag t = r.tag();
        m.share_tags.emplace_back(x, t);
      }
      m.message_tag = r.tag();
      r.expect_done();
      return m;
    }
    case kTypeFinalize: {
      FinalizeMessage m;
      m.key_id = r.key_id();
      std::uint16_t count = r.u16();
      m.accepted_x = r.bytes(r.checked_count(count));
      m.key_tag = r.tag();
      m.message_tag = r.tag();
      r.expect_done();
      return m;
    }
    default:
      throw DskeError(ErrorCode::unknown_message_type,
                      "message type " + std::to_string(type));
  }
}

bool has_message_tag(const Message& message) {
  return !std::holds_alternative<IdentityQuery>(message);
}

ByteView tag_scope(ByteView frame) {
  if (frame.size() < 4 + 1 + kTagBytes) {
    throw DskeError(ErrorCode::truncated, "frame too short for a tag");
  }
  return frame.subspan(4, frame.size() - 4 - kTagBytes);
}

Tag seal_frame(std::span<std::uint8_t> frame, const TagKey& key) {
  Tag tag = compute_tag(key, tag_scope(frame));
  tag.to_bytes(frame.data() + frame.size() - kTagBytes);
  return tag;
}

bool check_frame_tag(ByteView frame, const TagKey& key) {
  if (frame.size() < 4 + 1 + kTagBytes) return false;
  Tag claimed = Tag::from_bytes(frame.data() + frame.size() - kTagBytes);
  return verify_tag(key, tag_scope(frame), claimed);
}

}  // namespace dske::wire
