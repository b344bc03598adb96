#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dske/error.hpp"
#include "dske/psk_table.hpp"
#include "dske/rng.hpp"
#include "dske/secret_sharing.hpp"
#include "dske/wire.hpp"

namespace dske {

// Receiver-side acceptance gates, applied to every incoming instruction
// before any of its material is trusted.
struct ReceiverPolicy {
  // Empty set = accept any registered hub / sender.
  std::set<PartyId> accepted_hubs;
  std::set<PartyId> accepted_senders;
  std::uint16_t k_min = 1;  // lower bound the receiver enforces on k
  std::uint16_t n_min = 1;
  std::uint16_t n_max = 255;
  // The sharing scheme is pre-agreed between the parties, never negotiated.
  SchemeKind scheme = SchemeKind::shamir;
};

struct AgreedKey {
  KeyId key_id;
  enum class Status : std::uint8_t { agreed, aborted } status = Status::aborted;
  std::optional<ErrorCode> abort_reason;
  Bytes secret;            // the agreed key bits, empty unless agreed
  Bytes contributing_x;    // coordinates behind the winning candidate
};

// Candidate reconstruction and validation, shared between the receiving
// client and the benchmark harness. Shares must have equal lengths and
// distinct coordinates; the first l bytes of a candidate key the tag check
// over the rest.
struct CandidateInput {
  SchemeParams params;
  std::size_t tag_key_len = kTagKeyBytes;
  std::vector<Share> shares;  // size >= k
  std::optional<Tag> key_tag;
};

struct CandidateOutcome {
  // Distinct candidates that passed the key tag, with the coordinates used.
  std::vector<std::pair<SecretBundle, Bytes>> valid;
  bool cross_check_clean = true;
  std::size_t subsets_tried = 0;
  bool budget_exhausted = false;
};

// Fast path: one reconstruction from the first k shares plus a consistency
// check of every further share against it. Enumeration over k-subsets only
// happens when that check fails, stopping early once two distinct valid
// candidates prove an injection. The subset budget bounds hostile inputs that
// would otherwise force a combinatorial search.
CandidateOutcome validate_candidates(const CandidateInput& input,
                                     std::size_t subset_budget = 100000);

// Bootstrap key material for the negotiated flow: l-byte tag keys, one per
// share coordinate, then one for the receiver's negotiation message, then one
// for the initiator's finalize message. Each slice keys exactly one tag.
class BootstrapKey {
 public:
  BootstrapKey() = default;
  BootstrapKey(Bytes material, std::uint16_t n);

  static std::size_t required_bytes(std::uint16_t n) {
    return kTagKeyBytes * (static_cast<std::size_t>(n) + 2);
  }

  TagKey share_key(std::uint8_t x) const;  // peek, for verification
  TagKey take_share_key(std::uint8_t x);   // consume, for tagging
  TagKey negotiation_key() const;
  TagKey take_negotiation_key();
  TagKey finalize_key() const;
  TagKey take_finalize_key();

  std::size_t consumed_bytes() const { return consumed_.size() * kTagKeyBytes; }
  std::uint16_t n() const { return n_; }

 private:
  ByteView slice(std::size_t index) const;
  TagKey take(std::size_t index);

  Bytes material_;
  std::uint16_t n_ = 0;
  std::set<std::size_t> consumed_;
};

class Client {
 public:
  Client(PartyId id, std::uint64_t seed);

  const PartyId& id() const { return id_; }
  ReceiverPolicy& policy() { return policy_; }
  const std::set<PartyId>& excluded_hubs() const { return excluded_hubs_; }

  void add_hub_table(const PartyId& hub, PskTable table);
  PskTable& table(const PartyId& hub);
  bool has_hub(const PartyId& hub) const { return tables_.contains(hub); }

  // ---- initiator side ----

  struct Initiation {
    KeyId key_id;
    SchemeParams params;
    std::vector<PartyId> hubs;  // coordinate of hubs[i] is i+1
    std::vector<std::pair<PartyId, wire::KeyRequestMessage>> requests;
    std::vector<Share> shares;  // what each hub should relay
    SecretBundle secret;        // empty for raw distribution
  };

  // Full key agreement: k table pass-through shares, n-k derived shares
  // encrypted under fresh pads, key tag included. The agreed key bits go into
  // the keystore immediately; the initiator hears nothing back.
  Initiation initiate_key_agreement(const SchemeParams& params, std::size_t key_bytes,
                                    const std::vector<PartyId>& hubs,
                                    const PartyId& receiver);

  // Negotiated-flow distribution: every share is a table pass-through and no
  // key tag is sent; validity is settled bilaterally afterwards.
  Initiation initiate_raw_distribution(const SchemeParams& params, std::size_t key_bytes,
                                       const std::vector<PartyId>& hubs,
                                       const PartyId& receiver);

  // ---- receiver side ----

  // Gate, decrypt and store one relayed share. Returns the rejection reason,
  // or nullopt when the share was accepted. Referenced table ranges are
  // consumed even on rejection.
  std::optional<ErrorCode> receive_instruction(const wire::KeyInstructionMessage& msg);

  AgreedKey reconstruct_and_validate(const KeyId& key_id);

  std::size_t stored_share_count(const KeyId& key_id) const;

  // ---- peer identity ----

  wire::IdentityQuery make_identity_query(const PartyId& subject) const { return {subject}; }

  // Validates the response tag against this client's table with the hub.
  std::optional<ErrorCode> ingest_identity_response(const PartyId& hub,
                                                    const wire::IdentityResponse& response);

  struct ConsensusOutcome {
    std::optional<Bytes> record;
    std::vector<PartyId> dissenters;  // excluded from future acceptance
    std::optional<ErrorCode> error;
  };
  // Strict majority over the tag-valid responses collected for the subject.
  ConsensusOutcome conclude_identity_query(const PartyId& subject);

  // ---- negotiated (bootstrap + post-selection) flow ----

  struct FinalizeOutcome {
    std::optional<wire::FinalizeMessage> message;
    std::optional<ErrorCode> error;
    Bytes secret;
    Bytes accepted_x;
  };
  struct NegotiationOutcome {
    std::optional<wire::NegotiationMessage> message;
    std::optional<ErrorCode> error;
  };

  // Initiator: remember the bootstrap secret and the distributed raw shares.
  void arm_negotiation_initiator(const Initiation& raw, ByteView bootstrap_secret);
  // Receiver: consume a bootstrap key from the keystore and accept raw shares
  // from the given hubs only.
  std::optional<ErrorCode> arm_negotiation_receiver(const KeyId& bootstrap_key_id,
                                                    const SchemeParams& params,
                                                    const std::vector<PartyId>& hubs);

  NegotiationOutcome adapted_negotiate(const KeyId& raw_key_id);
  FinalizeOutcome adapted_finalize(const wire::NegotiationMessage& msg);
  AgreedKey adapted_complete(const wire::FinalizeMessage& msg);

  std::size_t initiator_bootstrap_consumed() const;
  std::size_t receiver_bootstrap_consumed() const;

  // ---- keystore ----

  // Destroy-on-read: a key can be fetched exactly once.
  std::optional<Bytes> fetch_key(const KeyId& key_id);
  bool has_key(const KeyId& key_id) const { return keystore_.contains(key_id); }

 private:
  struct ReceivedShare {
    std::uint8_t x = 0;
    Bytes data;
    std::uint16_t n = 0;
    std::uint16_t k = 0;
    std::optional<Tag> key_tag;
    PartyId hub;
  };

  struct InitiatorSession {
    KeyId key_id;
    SchemeParams params;
    std::vector<PartyId> hubs;
    std::vector<Share> shares;
    BootstrapKey bootstrap;
  };

  struct ReceiverSession {
    SchemeParams params;
    std::vector<PartyId> hubs;
    BootstrapKey bootstrap;
  };

  Initiation build_requests(const SchemeParams& params, std::size_t key_bytes,
                            const std::vector<PartyId>& hubs, const PartyId& receiver,
                            bool with_key_tag);
  KeyId next_key_id();
  std::optional<ErrorCode> policy_gate(const wire::KeyInstructionMessage& msg) const;

  PartyId id_;
  Rng rng_;
  std::array<std::uint8_t, 16> nonce_{};
  std::uint64_t next_index_ = 0;
  std::map<PartyId, PskTable> tables_;
  ReceiverPolicy policy_;
  std::set<PartyId> excluded_hubs_;
  std::map<KeyId, std::vector<ReceivedShare>> pending_;
  std::map<PartyId, std::map<PartyId, Bytes>> identity_votes_;  // subject -> hub -> record
  std::map<KeyId, Bytes> keystore_;
  std::optional<InitiatorSession> initiator_session_;
  std::optional<ReceiverSession> receiver_session_;
};

}  // namespace dske
