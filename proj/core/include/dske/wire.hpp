#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "dske/auth_tags.hpp"
#include "dske/bytes.hpp"
#include "dske/ids.hpp"

// Binary protocol frames. Encoding is canonical: fixed field order, big-endian
// integers, a u32 length prefix per frame and a one-byte message type. Two
// equal messages always encode to identical bytes, which is what lets message
// tags be computed over the encoding itself.
//
// Every tagged message ends with an 8-byte message tag covering the whole
// frame body (type byte included) up to the tag itself.

namespace dske::wire {

// Reference into a pre-shared table: which bytes key or pad this message.
struct SliceRef {
  std::uint64_t table_id = 0;
  std::uint64_t start = 0;
  std::uint64_t length = 0;

  bool operator==(const SliceRef&) const = default;
};

// Initiator -> hub. Carries the table indices that define this hub's share,
// the encrypted share when the share is not a table pass-through, and the key
// tag that the receiver will later validate the reconstructed secret against.
struct KeyRequestMessage {
  PartyId sender;
  PartyId receiver;
  KeyId key_id;
  std::uint16_t n = 0;
  std::uint16_t k = 0;
  Bytes x_coords;           // all n coordinates, hub order
  std::uint8_t x_coord = 0;  // the addressed hub's own coordinate
  SliceRef share_slice;
  std::optional<Bytes> encrypted_share;  // present for derived shares only
  std::optional<Tag> key_tag;            // absent in raw-share distribution
  SliceRef msg_tag_slice;
  Tag message_tag;

  bool operator==(const KeyRequestMessage&) const = default;
};

// Hub -> receiver, the re-keyed relay of one share.
struct KeyInstructionMessage {
  PartyId hub;
  PartyId sender;
  KeyId key_id;
  std::uint16_t n = 0;
  std::uint16_t k = 0;
  std::uint8_t x_coord = 0;
  SliceRef slice;
  Bytes encrypted_share;
  std::optional<Tag> key_tag;
  SliceRef msg_tag_slice;
  Tag message_tag;

  bool operator==(const KeyInstructionMessage&) const = default;
};

struct IdentityQuery {
  PartyId subject;

  bool operator==(const IdentityQuery&) const = default;
};

struct IdentityResponse {
  PartyId subject;
  Bytes record;
  SliceRef msg_tag_slice;
  Tag message_tag;

  bool operator==(const IdentityResponse&) const = default;
};

// Receiver -> initiator in the negotiated flow: one tag per validated share.
struct NegotiationMessage {
  KeyId key_id;
  std::vector<std::pair<std::uint8_t, Tag>> share_tags;
  Tag message_tag;

  bool operator==(const NegotiationMessage&) const = default;
};

// Initiator -> receiver in the negotiated flow: the accepted coordinate list
// and the key tag for the secret combined over it.
struct FinalizeMessage {
  KeyId key_id;
  Bytes accepted_x;
  Tag key_tag;
  Tag message_tag;

  bool operator==(const FinalizeMessage&) const = default;
};

using Message = std::variant<KeyRequestMessage, KeyInstructionMessage, IdentityQuery,
                             IdentityResponse, NegotiationMessage, FinalizeMessage>;

// Full frame including the length prefix.
Bytes encode(const Message& message);
Message decode(ByteView frame);

bool has_message_tag(const Message& message);

// Bytes covered by the message tag: the frame body minus the trailing tag.
// Only meaningful for tagged message types.
ByteView tag_scope(ByteView frame);

// Overwrites the trailing message tag of an encoded frame in place and
// returns the tag, computed over tag_scope with the given key.
Tag seal_frame(std::span<std::uint8_t> frame, const TagKey& key);

bool check_frame_tag(ByteView frame, const TagKey& key);

}  // namespace dske::wire
