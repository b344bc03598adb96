#include "dske/hub.hpp"

#include <algorithm>

namespace dske {

void Hub::register_client(const PartyId& client, Bytes identity_record, PskTable table) {
  if (tables_.contains(client)) {
    throw DskeError(ErrorCode::bad_params, "client already registered");
  }
  registry_.emplace(client, std::move(identity_record));
  tables_.emplace(client, std::move(table));
}

PskTable& Hub::table(const PartyId& client) {
  auto it = tables_.find(client);
  if (it == tables_.end()) throw DskeError(ErrorCode::unknown_client, client.display());
  return it->second;
}

const PskTable& Hub::table(const PartyId& client) const {
  auto it = tables_.find(client);
  if (it == tables_.end()) throw DskeError(ErrorCode::unknown_client, client.display());
  return it->second;
}

Hub::RequestOutcome Hub::handle_key_request(const wire::KeyRequestMessage& msg) {
  auto reject = [](ErrorCode code) { return RequestOutcome{std::nullopt, code}; };

  if (!tables_.contains(msg.sender)) return reject(ErrorCode::unknown_client);
  if (!tables_.contains(msg.receiver)) return reject(ErrorCode::unknown_client);

  if (request_cap_ != 0) {
    std::uint64_t& count = request_counts_[msg.sender];
    if (count >= request_cap_) return reject(ErrorCode::request_cap_exceeded);
    ++count;
  }

  // Structural checks before anything is consumed.
  if (msg.k < 1 || msg.k > msg.n || msg.n > 255) return reject(ErrorCode::malformed_message);
  if (msg.msg_tag_slice.length != kTagKeyBytes) return reject(ErrorCode::malformed_message);
  if (msg.x_coord == 0 ||
      std::find(msg.x_coords.begin(), msg.x_coords.end(), msg.x_coord) == msg.x_coords.end()) {
    return reject(ErrorCode::malformed_message);
  }
  if (msg.encrypted_share && msg.encrypted_share->size() != msg.share_slice.length) {
    return reject(ErrorCode::malformed_message);
  }

  PskTable& sender_table = tables_.at(msg.sender);
  if (msg.share_slice.table_id != sender_table.table_id() ||
      msg.msg_tag_slice.table_id != sender_table.table_id()) {
    return reject(ErrorCode::malformed_message);
  }

  // Consume the referenced ranges in message order; they stay consumed even
  // if validation fails below.
  KeySlice share_material, tag_material;
  try {
    share_material = sender_table.claim_range(msg.share_slice.start, msg.share_slice.length);
    tag_material = sender_table.claim_range(msg.msg_tag_slice.start, msg.msg_tag_slice.length);
  } catch (const DskeError& e) {
    return reject(e.code());
  }

  TagKey msg_key = TagKey::from_bytes(ByteView(tag_material.bytes));
  Bytes frame = wire::encode(msg);
  if (!wire::check_frame_tag(frame, msg_key)) return reject(ErrorCode::tag_invalid);

  // Recover this hub's share.
  Bytes share = msg.encrypted_share ? xor_bytes(*msg.encrypted_share, share_material.bytes)
                                    : std::move(share_material.bytes);

  PskTable& receiver_table = tables_.at(msg.receiver);
  KeySlice pad, out_tag_material;
  try {
    pad = receiver_table.allocate(share.size());
    out_tag_material = receiver_table.allocate(kTagKeyBytes);
  } catch (const DskeError& e) {
    return reject(e.code());
  }

  wire::KeyInstructionMessage out;
  out.hub = id_;
  out.sender = msg.sender;
  out.key_id = msg.key_id;
  out.n = msg.n;
  out.k = msg.k;
  out.x_coord = msg.x_coord;
  out.slice = wire::SliceRef{pad.table_id, pad.start, pad.length()};
  out.encrypted_share = xor_bytes(share, pad.bytes);
  out.key_tag = msg.key_tag;
  out.msg_tag_slice =
      wire::SliceRef{out_tag_material.table_id, out_tag_material.start, out_tag_material.length()};

  Bytes out_frame = wire::encode(out);
  out.message_tag = wire::seal_frame(out_frame, TagKey::from_bytes(ByteView(out_tag_material.bytes)));
  return RequestOutcome{std::move(out), std::nullopt};
}

Hub::QueryOutcome Hub::handle_identity_query(const wire::IdentityQuery& query,
                                             const PartyId& querier) {
  auto reject = [](ErrorCode code) { return QueryOutcome{std::nullopt, code}; };

  auto table_it = tables_.find(querier);
  if (table_it == tables_.end()) return reject(ErrorCode::unknown_client);
  auto record_it = registry_.find(query.subject);
  if (record_it == registry_.end()) return reject(ErrorCode::unknown_subject);

  KeySlice tag_material;
  try {
    tag_material = table_it->second.allocate(kTagKeyBytes);
  } catch (const DskeError& e) {
    return reject(e.code());
  }

  wire::IdentityResponse out;
  out.subject = query.subject;
  out.record = record_it->second;
  out.msg_tag_slice =
      wire::SliceRef{tag_material.table_id, tag_material.start, tag_material.length()};
  Bytes frame = wire::encode(out);
  out.message_tag = wire::seal_frame(frame, TagKey::from_bytes(ByteView(tag_material.bytes)));
  return QueryOutcome{std::move(out), std::nullopt};
}

}  // namespace dske
