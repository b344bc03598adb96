#include "dske/client.hpp"

#include <algorithm>
#include <tuple>

namespace dske {

namespace {

bool next_combination(std::vector<std::size_t>& idx, std::size_t s) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (idx[i] != i + s - k) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

bool key_tag_matches(const SecretBundle& candidate, std::size_t l, const Tag& tag) {
  TagKey key = TagKey::from_bytes(candidate.tag_key(l));
  return verify_tag(key, candidate.key_bits(l), tag);
}

}  // namespace

CandidateOutcome validate_candidates(const CandidateInput& input, std::size_t subset_budget) {
  validate_params(input.params);
  const std::size_t k = input.params.k;
  if (input.shares.size() < k) throw DskeError(ErrorCode::insufficient_shares);

  std::vector<Share> shares = input.shares;
  std::sort(shares.begin(), shares.end(),
            [](const Share& a, const Share& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < shares.size(); ++i) {
    if (shares[i].x == shares[i - 1].x) throw DskeError(ErrorCode::duplicate_coordinate);
    if (shares[i].data.size() != shares[0].data.size()) {
      throw DskeError(ErrorCode::length_mismatch);
    }
  }
  if (shares[0].data.size() <= input.tag_key_len) {
    throw DskeError(ErrorCode::length_mismatch, "shares shorter than the tag key");
  }

  CandidateOutcome out;
  auto accept_if_valid = [&](const SecretBundle& candidate, ByteView xs) {
    if (!input.key_tag || !key_tag_matches(candidate, input.tag_key_len, *input.key_tag)) {
      return;
    }
    for (const auto& [existing, coords] : out.valid) {
      if (existing.secret == candidate.secret) return;
    }
    out.valid.emplace_back(candidate, Bytes(xs.begin(), xs.end()));
  };

  if (input.params.kind == SchemeKind::xor_all) {
    // Single subset: every share participates.
    out.subsets_tried = 1;
    SecretBundle candidate = reconstruct(input.params, shares);
    Bytes xs;
    for (const Share& s : shares) xs.push_back(s.x);
    accept_if_valid(candidate, ByteView(xs));
    return out;
  }

  // Optimistic pass: one reconstruction, then check that every remaining
  // share lies on the same polynomial.
  {
    std::vector<std::uint8_t> xs;
    std::vector<ByteView> rows;
    for (std::size_t i = 0; i < k; ++i) {
      xs.push_back(shares[i].x);
      rows.push_back(ByteView(shares[i].data));
    }
    ShamirEngine engine(xs);
    auto coeff = engine.coefficients(rows);
    out.subsets_tried = 1;

    bool clean = true;
    for (std::size_t i = k; i < shares.size() && clean; ++i) {
      clean = (ShamirEngine::evaluate(coeff, shares[i].x) == shares[i].data);
    }
    if (clean) {
      out.cross_check_clean = true;
      accept_if_valid(SecretBundle{std::move(coeff[0])}, ByteView(xs));
      return out;
    }
  }

  // Some share disagrees: enumerate subsets, validating each candidate
  // against the key tag. Two distinct survivors already prove an injection,
  // so the scan stops there.
  out.cross_check_clean = false;
  out.subsets_tried = 0;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  do {
    if (out.subsets_tried >= subset_budget) {
      out.budget_exhausted = true;
      break;
    }
    ++out.subsets_tried;
    std::vector<std::uint8_t> xs;
    std::vector<ByteView> rows;
    for (std::size_t i : idx) {
      xs.push_back(shares[i].x);
      rows.push_back(ByteView(shares[i].data));
    }
    ShamirEngine engine(xs);
    auto coeff = engine.coefficients(rows);
    accept_if_valid(SecretBundle{std::move(coeff[0])}, ByteView(xs));
    if (out.valid.size() >= 2) break;
  } while (next_combination(idx, shares.size()));
  return out;
}

// --- BootstrapKey ------------------------------------------------------------

BootstrapKey::BootstrapKey(Bytes material, std::uint16_t n) : material_(std::move(material)), n_(n) {
  if (material_.size() != required_bytes(n)) {
    throw DskeError(ErrorCode::length_mismatch, "bootstrap key size");
  }
}

ByteView BootstrapKey::slice(std::size_t index) const {
  return ByteView(material_).subspan(index * kTagKeyBytes, kTagKeyBytes);
}

TagKey BootstrapKey::take(std::size_t index) {
  if (consumed_.contains(index)) {
    throw DskeError(ErrorCode::overlap_detected, "bootstrap slice already used");
  }
  consumed_.insert(index);
  return TagKey::from_bytes(slice(index));
}

TagKey BootstrapKey::share_key(std::uint8_t x) const {
  if (x == 0 || x > n_) throw DskeError(ErrorCode::out_of_bounds, "share key coordinate");
  return TagKey::from_bytes(slice(x - 1));
}
TagKey BootstrapKey::take_share_key(std::uint8_t x) {
  if (x == 0 || x > n_) throw DskeError(ErrorCode::out_of_bounds, "share key coordinate");
  return take(x - 1);
}
TagKey BootstrapKey::negotiation_key() const { return TagKey::from_bytes(slice(n_)); }
TagKey BootstrapKey::take_negotiation_key() { return take(n_); }
TagKey BootstrapKey::finalize_key() const { return TagKey::from_bytes(slice(n_ + 1)); }
TagKey BootstrapKey::take_finalize_key() { return take(n_ + 1); }

// --- Client ------------------------------------------------------------------

Client::Client(PartyId id, std::uint64_t seed) : id_(id), rng_(seed) {}

void Client::add_hub_table(const PartyId& hub, PskTable table) {
  if (tables_.contains(hub)) throw DskeError(ErrorCode::bad_params, "hub already has a table");
  tables_.emplace(hub, std::move(table));
}

PskTable& Client::table(const PartyId& hub) {
  auto it = tables_.find(hub);
  if (it == tables_.end()) throw DskeError(ErrorCode::unknown_client, hub.display());
  return it->second;
}

KeyId Client::next_key_id() {
  KeyId id;
  rng_.fill(std::span<std::uint8_t>(id.nonce.data(), id.nonce.size()));
  id.index = next_index_++;
  return id;
}

Client::Initiation Client::build_requests(const SchemeParams& params, std::size_t key_bytes,
                                          const std::vector<PartyId>& hubs,
                                          const PartyId& receiver, bool with_key_tag) {
  validate_params(params);
  if (key_bytes == 0) throw DskeError(ErrorCode::bad_params, "empty key requested");
  if (hubs.size() != params.n) {
    throw DskeError(ErrorCode::bad_params, "hub list must have n entries");
  }
  for (const PartyId& hub : hubs) {
    if (!tables_.contains(hub)) throw DskeError(ErrorCode::unknown_client, hub.display());
  }

  const std::size_t share_len = key_bytes + kTagKeyBytes;
  const std::uint16_t n = params.n;
  const std::uint16_t k = params.k;

  Initiation out;
  out.key_id = next_key_id();
  out.params = params;
  out.hubs = hubs;

  // Material per hub, share pad first, then the message tag key.
  std::vector<KeySlice> share_slices, tag_slices;
  share_slices.reserve(n);
  tag_slices.reserve(n);
  for (const PartyId& hub : hubs) {
    PskTable& t = tables_.at(hub);
    share_slices.push_back(t.allocate(share_len));
    tag_slices.push_back(t.allocate(kTagKeyBytes));
  }

  std::optional<Tag> key_tag;
  if (with_key_tag) {
    std::vector<Share> fixed;
    fixed.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      fixed.push_back(Share{static_cast<std::uint8_t>(i + 1), share_slices[i].bytes});
    }
    auto [all, secret] = complete_shares(params, fixed);
    out.shares = std::move(all);
    out.secret = std::move(secret);
    key_tag = compute_tag(TagKey::from_bytes(out.secret.tag_key(kTagKeyBytes)),
                          out.secret.key_bits(kTagKeyBytes));
    auto bits = out.secret.key_bits(kTagKeyBytes);
    keystore_[out.key_id] = Bytes(bits.begin(), bits.end());
  } else {
    out.shares.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.shares.push_back(Share{static_cast<std::uint8_t>(i + 1), share_slices[i].bytes});
    }
  }

  Bytes x_coords(n);
  for (std::size_t i = 0; i < n; ++i) x_coords[i] = static_cast<std::uint8_t>(i + 1);

  for (std::size_t i = 0; i < n; ++i) {
    wire::KeyRequestMessage req;
    req.sender = id_;
    req.receiver = receiver;
    req.key_id = out.key_id;
    req.n = n;
    req.k = k;
    req.x_coords = x_coords;
    req.x_coord = static_cast<std::uint8_t>(i + 1);
    req.share_slice =
        wire::SliceRef{share_slices[i].table_id, share_slices[i].start, share_slices[i].length()};
    if (with_key_tag && i >= k) {
      req.encrypted_share = xor_bytes(ByteView(out.shares[i].data), ByteView(share_slices[i].bytes));
    }
    req.key_tag = key_tag;
    req.msg_tag_slice =
        wire::SliceRef{tag_slices[i].table_id, tag_slices[i].start, tag_slices[i].length()};
    Bytes frame = wire::encode(req);
    req.message_tag = wire::seal_frame(frame, TagKey::from_bytes(ByteView(tag_slices[i].bytes)));
    out.requests.emplace_back(hubs[i], std::move(req));
  }
  return out;
}

Client::Initiation Client::initiate_key_agreement(const SchemeParams& params,
                                                  std::size_t key_bytes,
                                                  const std::vector<PartyId>& hubs,
                                                  const PartyId& receiver) {
  return build_requests(params, key_bytes, hubs, receiver, true);
}

Client::Initiation Client::initiate_raw_distribution(const SchemeParams& params,
                                                     std::size_t key_bytes,
                                                     const std::vector<PartyId>& hubs,
                                                     const PartyId& receiver) {
  return build_requests(params, key_bytes, hubs, receiver, false);
}

std::optional<ErrorCode> Client::policy_gate(const wire::KeyInstructionMessage& msg) const {
  if (excluded_hubs_.contains(msg.hub)) return ErrorCode::hub_not_accepted;
  if (!policy_.accepted_hubs.empty() && !policy_.accepted_hubs.contains(msg.hub)) {
    return ErrorCode::hub_not_accepted;
  }
  if (!tables_.contains(msg.hub)) return ErrorCode::hub_not_accepted;
  if (!policy_.accepted_senders.empty() && !policy_.accepted_senders.contains(msg.sender)) {
    return ErrorCode::sender_not_accepted;
  }
  if (msg.n < policy_.n_min || msg.n > policy_.n_max || msg.n > 255) {
    return ErrorCode::params_out_of_range;
  }
  if (msg.k < policy_.k_min || msg.k > msg.n) return ErrorCode::params_out_of_range;
  if (msg.x_coord == 0 || msg.x_coord > msg.n) return ErrorCode::params_out_of_range;
  if (msg.msg_tag_slice.length != kTagKeyBytes) return ErrorCode::params_out_of_range;
  if (msg.slice.length <= kTagKeyBytes) return ErrorCode::params_out_of_range;
  return std::nullopt;
}

std::optional<ErrorCode> Client::receive_instruction(const wire::KeyInstructionMessage& msg) {
  if (auto gate = policy_gate(msg)) return gate;

  if (!msg.key_tag) {
    // Untagged shares belong to an armed negotiation and must come from its
    // first-pass hubs.
    if (!receiver_session_) return ErrorCode::params_out_of_range;
    const auto& hubs = receiver_session_->hubs;
    if (std::find(hubs.begin(), hubs.end(), msg.hub) == hubs.end()) {
      return ErrorCode::hub_not_accepted;
    }
  }

  PskTable& t = tables_.at(msg.hub);
  if (msg.slice.table_id != t.table_id() || msg.msg_tag_slice.table_id != t.table_id()) {
    return ErrorCode::malformed_message;
  }

  KeySlice pad, tag_material;
  try {
    pad = t.claim_range(msg.slice.start, msg.slice.length);
    tag_material = t.claim_range(msg.msg_tag_slice.start, msg.msg_tag_slice.length);
  } catch (const DskeError& e) {
    return e.code();
  }

  Bytes frame = wire::encode(msg);
  if (!wire::check_frame_tag(frame, TagKey::from_bytes(ByteView(tag_material.bytes)))) {
    return ErrorCode::tag_invalid;
  }

  ReceivedShare share;
  share.x = msg.x_coord;
  share.data = xor_bytes(ByteView(msg.encrypted_share), ByteView(pad.bytes));
  share.n = msg.n;
  share.k = msg.k;
  share.key_tag = msg.key_tag;
  share.hub = msg.hub;
  pending_[msg.key_id].push_back(std::move(share));
  return std::nullopt;
}

std::size_t Client::stored_share_count(const KeyId& key_id) const {
  auto it = pending_.find(key_id);
  return it == pending_.end() ? 0 : it->second.size();
}

AgreedKey Client::reconstruct_and_validate(const KeyId& key_id) {
  AgreedKey result;
  result.key_id = key_id;

  auto it = pending_.find(key_id);
  if (it == pending_.end() || it->second.empty()) {
    result.abort_reason = ErrorCode::insufficient_shares;
    return result;
  }

  // Shares only combine when their protocol parameters agree; group by the
  // full parameter tuple and keep the first share per coordinate in a group.
  using GroupKey = std::tuple<std::uint16_t, std::uint16_t, bool, std::uint64_t, std::size_t>;
  std::map<GroupKey, std::vector<const ReceivedShare*>> groups;
  for (const ReceivedShare& s : it->second) {
    GroupKey gk{s.n, s.k, s.key_tag.has_value(), s.key_tag ? s.key_tag->value : 0,
                s.data.size()};
    auto& vec = groups[gk];
    bool duplicate = false;
    for (const ReceivedShare* prev : vec) duplicate = duplicate || prev->x == s.x;
    if (!duplicate) vec.push_back(&s);
  }

  bool any_group_complete = false;
  bool budget_exhausted = false;
  std::vector<std::pair<SecretBundle, Bytes>> merged;
  for (const auto& [gk, members] : groups) {
    const auto [n, k, has_tag, tag_value, len] = gk;
    if (members.size() < k || !has_tag) continue;
    any_group_complete = true;

    CandidateInput input;
    input.params = SchemeParams{n, k, policy_.scheme};
    input.key_tag = Tag{tag_value};
    input.shares.reserve(members.size());
    for (const ReceivedShare* s : members) input.shares.push_back(Share{s->x, s->data});

    CandidateOutcome outcome;
    try {
      outcome = validate_candidates(input);
    } catch (const DskeError& e) {
      result.abort_reason = e.code();
      return result;
    }
    budget_exhausted = budget_exhausted || outcome.budget_exhausted;
    for (auto& cand : outcome.valid) {
      bool seen = false;
      for (const auto& m : merged) seen = seen || m.first.secret == cand.first.secret;
      if (!seen) merged.push_back(std::move(cand));
    }
  }

  if (!any_group_complete) {
    result.abort_reason = ErrorCode::insufficient_shares;
    return result;
  }
  if (merged.size() > 1) {
    result.abort_reason = ErrorCode::injection_detected;
    return result;
  }
  if (budget_exhausted || merged.empty()) {
    result.abort_reason = ErrorCode::validation_failed;
    return result;
  }

  const auto& [bundle, coords] = merged.front();
  auto bits = bundle.key_bits(kTagKeyBytes);
  result.status = AgreedKey::Status::agreed;
  result.abort_reason.reset();
  result.secret = Bytes(bits.begin(), bits.end());
  result.contributing_x = coords;
  keystore_[key_id] = result.secret;
  pending_.erase(key_id);
  return result;
}

// --- peer identity -----------------------------------------------------------

std::optional<ErrorCode> Client::ingest_identity_response(const PartyId& hub,
                                                          const wire::IdentityResponse& response) {
  if (excluded_hubs_.contains(hub)) return ErrorCode::hub_not_accepted;
  auto table_it = tables_.find(hub);
  if (table_it == tables_.end()) return ErrorCode::hub_not_accepted;
  if (response.msg_tag_slice.length != kTagKeyBytes ||
      response.msg_tag_slice.table_id != table_it->second.table_id()) {
    return ErrorCode::params_out_of_range;
  }

  KeySlice tag_material;
  try {
    tag_material = table_it->second.claim_range(response.msg_tag_slice.start,
                                                response.msg_tag_slice.length);
  } catch (const DskeError& e) {
    return e.code();
  }
  Bytes frame = wire::encode(response);
  if (!wire::check_frame_tag(frame, TagKey::from_bytes(ByteView(tag_material.bytes)))) {
    return ErrorCode::tag_invalid;
  }
  identity_votes_[response.subject][hub] = response.record;
  return std::nullopt;
}

Client::ConsensusOutcome Client::conclude_identity_query(const PartyId& subject) {
  ConsensusOutcome out;
  auto it = identity_votes_.find(subject);
  if (it == identity_votes_.end() || it->second.empty()) {
    out.error = ErrorCode::no_consensus;
    return out;
  }
  const auto votes = std::move(it->second);
  identity_votes_.erase(it);

  std::map<Bytes, std::size_t> tally;
  for (const auto& [hub, record] : votes) ++tally[record];
  const Bytes* winner = nullptr;
  for (const auto& [record, count] : tally) {
    if (count * 2 > votes.size()) winner = &record;
  }
  if (winner == nullptr) {
    out.error = ErrorCode::no_consensus;
    return out;
  }
  out.record = *winner;
  for (const auto& [hub, record] : votes) {
    if (record != *winner) {
      out.dissenters.push_back(hub);
      excluded_hubs_.insert(hub);
    }
  }
  return out;
}

// --- negotiated flow ---------------------------------------------------------

void Client::arm_negotiation_initiator(const Initiation& raw, ByteView bootstrap_secret) {
  InitiatorSession session;
  session.key_id = raw.key_id;
  session.params = raw.params;
  session.hubs = raw.hubs;
  session.shares = raw.shares;
  session.bootstrap = BootstrapKey(Bytes(bootstrap_secret.begin(), bootstrap_secret.end()),
                                   raw.params.n);
  initiator_session_ = std::move(session);
}

std::optional<ErrorCode> Client::arm_negotiation_receiver(const KeyId& bootstrap_key_id,
                                                          const SchemeParams& params,
                                                          const std::vector<PartyId>& hubs) {
  auto secret = fetch_key(bootstrap_key_id);
  if (!secret) return ErrorCode::bad_params;
  if (secret->size() != BootstrapKey::required_bytes(params.n)) {
    return ErrorCode::length_mismatch;
  }
  ReceiverSession session;
  session.params = params;
  session.hubs = hubs;
  session.bootstrap = BootstrapKey(std::move(*secret), params.n);
  receiver_session_ = std::move(session);
  return std::nullopt;
}

Client::NegotiationOutcome Client::adapted_negotiate(const KeyId& raw_key_id) {
  NegotiationOutcome out;
  if (!receiver_session_) {
    out.error = ErrorCode::bad_params;
    return out;
  }
  auto it = pending_.find(raw_key_id);
  const std::size_t needed =
      std::max<std::size_t>(receiver_session_->params.k, policy_.k_min);
  std::vector<const ReceivedShare*> usable;
  if (it != pending_.end()) {
    for (const ReceivedShare& s : it->second) {
      if (!s.key_tag) usable.push_back(&s);
    }
  }
  std::sort(usable.begin(), usable.end(),
            [](const ReceivedShare* a, const ReceivedShare* b) { return a->x < b->x; });
  usable.erase(std::unique(usable.begin(), usable.end(),
                           [](const ReceivedShare* a, const ReceivedShare* b) {
                             return a->x == b->x;
                           }),
               usable.end());
  if (usable.size() < needed) {
    out.error = ErrorCode::insufficient_valid_shares;
    return out;
  }

  wire::NegotiationMessage msg;
  msg.key_id = raw_key_id;
  try {
    for (const ReceivedShare* s : usable) {
      TagKey key = receiver_session_->bootstrap.take_share_key(s->x);
      msg.share_tags.emplace_back(s->x, compute_tag(key, ByteView(s->data)));
    }
    Bytes frame = wire::encode(msg);
    msg.message_tag =
        wire::seal_frame(frame, receiver_session_->bootstrap.take_negotiation_key());
  } catch (const DskeError& e) {
    out.error = e.code();
    return out;
  }
  out.message = std::move(msg);
  return out;
}

Client::FinalizeOutcome Client::adapted_finalize(const wire::NegotiationMessage& msg) {
  FinalizeOutcome out;
  if (!initiator_session_ || msg.key_id != initiator_session_->key_id) {
    out.error = ErrorCode::bad_params;
    return out;
  }
  InitiatorSession& session = *initiator_session_;

  Bytes frame = wire::encode(msg);
  if (!wire::check_frame_tag(frame, session.bootstrap.negotiation_key())) {
    out.error = ErrorCode::tag_invalid;
    return out;
  }

  // Keep the shares whose tags verify under their dedicated bootstrap keys.
  std::vector<const Share*> accepted;
  for (const auto& [x, tag] : msg.share_tags) {
    const Share* mine = nullptr;
    for (const Share& s : session.shares) {
      if (s.x == x) mine = &s;
    }
    if (mine == nullptr) continue;
    try {
      if (verify_tag(session.bootstrap.share_key(x), ByteView(mine->data), tag)) {
        accepted.push_back(mine);
      }
    } catch (const DskeError&) {
      continue;
    }
  }
  if (accepted.size() < session.params.k) {
    out.error = ErrorCode::insufficient_valid_shares;
    return out;
  }

  Bytes secret(accepted.front()->data.size(), 0);
  Bytes coords;
  for (const Share* s : accepted) {
    xor_into(secret, ByteView(s->data));
    coords.push_back(s->x);
  }
  SecretBundle bundle{std::move(secret)};

  wire::FinalizeMessage fin;
  fin.key_id = session.key_id;
  fin.accepted_x = coords;
  fin.key_tag = compute_tag(TagKey::from_bytes(bundle.tag_key(kTagKeyBytes)),
                            bundle.key_bits(kTagKeyBytes));
  try {
    Bytes fin_frame = wire::encode(fin);
    fin.message_tag = wire::seal_frame(fin_frame, session.bootstrap.take_finalize_key());
  } catch (const DskeError& e) {
    out.error = e.code();
    return out;
  }

  auto bits = bundle.key_bits(kTagKeyBytes);
  out.secret = Bytes(bits.begin(), bits.end());
  out.accepted_x = coords;
  out.message = std::move(fin);
  keystore_[session.key_id] = out.secret;
  return out;
}

AgreedKey Client::adapted_complete(const wire::FinalizeMessage& msg) {
  AgreedKey result;
  result.key_id = msg.key_id;
  if (!receiver_session_) {
    result.abort_reason = ErrorCode::bad_params;
    return result;
  }
  ReceiverSession& session = *receiver_session_;

  Bytes frame = wire::encode(msg);
  if (!wire::check_frame_tag(frame, session.bootstrap.finalize_key())) {
    result.abort_reason = ErrorCode::tag_invalid;
    return result;
  }

  const std::size_t needed = std::max<std::size_t>(session.params.k, policy_.k_min);
  if (msg.accepted_x.empty() || msg.accepted_x.size() < needed) {
    result.abort_reason = ErrorCode::insufficient_valid_shares;
    return result;
  }

  auto it = pending_.find(msg.key_id);
  if (it == pending_.end()) {
    result.abort_reason = ErrorCode::insufficient_shares;
    return result;
  }

  // The list must name shares this receiver validated himself.
  Bytes secret;
  std::set<std::uint8_t> seen;
  for (std::uint8_t x : msg.accepted_x) {
    if (seen.contains(x)) {
      result.abort_reason = ErrorCode::duplicate_coordinate;
      return result;
    }
    seen.insert(x);
    const ReceivedShare* mine = nullptr;
    for (const ReceivedShare& s : it->second) {
      if (s.x == x && !s.key_tag) mine = &s;
    }
    if (mine == nullptr) {
      result.abort_reason = ErrorCode::validation_failed;
      return result;
    }
    if (secret.empty()) {
      secret = mine->data;
    } else {
      xor_into(secret, ByteView(mine->data));
    }
  }

  SecretBundle bundle{std::move(secret)};
  if (!key_tag_matches(bundle, kTagKeyBytes, msg.key_tag)) {
    result.abort_reason = ErrorCode::tag_invalid;
    return result;
  }

  auto bits = bundle.key_bits(kTagKeyBytes);
  result.status = AgreedKey::Status::agreed;
  result.secret = Bytes(bits.begin(), bits.end());
  result.contributing_x = msg.accepted_x;
  keystore_[msg.key_id] = result.secret;
  pending_.erase(msg.key_id);
  return result;
}

std::size_t Client::initiator_bootstrap_consumed() const {
  return initiator_session_ ? initiator_session_->bootstrap.consumed_bytes() : 0;
}

std::size_t Client::receiver_bootstrap_consumed() const {
  return receiver_session_ ? receiver_session_->bootstrap.consumed_bytes() : 0;
}

std::optional<Bytes> Client::fetch_key(const KeyId& key_id) {
  auto it = keystore_.find(key_id);
  if (it == keystore_.end()) return std::nullopt;
  Bytes secret = std::move(it->second);
  keystore_.erase(it);
  return secret;
}

}  // namespace dske
