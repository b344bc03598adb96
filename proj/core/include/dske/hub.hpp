#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "dske/error.hpp"
#include "dske/psk_table.hpp"
#include "dske/wire.hpp"

namespace dske {

// Security hub: relays one share per key agreement, re-keyed from the
// sender's table onto the receiver's table, and answers identity queries.
// Invalid requests are dropped, never answered; error responses would be an
// unauthenticated oracle. Table ranges referenced by a message are consumed
// even when its validation fails.
class Hub {
 public:
  explicit Hub(PartyId id) : id_(id) {}

  const PartyId& id() const { return id_; }

  // Registry is append-only; re-registering an id is an error.
  void register_client(const PartyId& client, Bytes identity_record, PskTable table);

  bool knows_client(const PartyId& client) const { return tables_.contains(client); }

  // Per-sender limit on key requests. 0 disables the cap.
  void set_request_cap(std::uint64_t cap) { request_cap_ = cap; }

  struct RequestOutcome {
    std::optional<wire::KeyInstructionMessage> instruction;
    std::optional<ErrorCode> rejection;
  };
  RequestOutcome handle_key_request(const wire::KeyRequestMessage& msg);

  struct QueryOutcome {
    std::optional<wire::IdentityResponse> response;
    std::optional<ErrorCode> rejection;
  };
  QueryOutcome handle_identity_query(const wire::IdentityQuery& query, const PartyId& querier);

  // Direct table access. Such access is exactly what "compromised hub" means
  // in the simulator, and what tests use to check both ends of a relay.
  PskTable& table(const PartyId& client);
  const PskTable& table(const PartyId& client) const;

 private:
  PartyId id_;
  std::map<PartyId, PskTable> tables_;
  std::map<PartyId, Bytes> registry_;
  std::uint64_t request_cap_ = 0;
  std::map<PartyId, std::uint64_t> request_counts_;
};

}  // namespace dske
