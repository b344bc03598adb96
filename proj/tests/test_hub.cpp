#include "dske/hub.hpp"

#include "doctest.h"
#include "rig.hpp"

using namespace dske;
using namespace dske::testing;

namespace {

wire::KeyRequestMessage first_request(Client::Initiation& init) {
  return init.requests.at(0).second;
}

}  // namespace

TEST_CASE("pass-through share relays the sender's table material") {
  Rig rig(1);
  auto init = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 32,
                                               rig.front_hubs(1), rig.bob.id());
  auto request = first_request(init);
  REQUIRE_FALSE(request.encrypted_share.has_value());

  auto outcome = rig.hubs[0].handle_key_request(request);
  REQUIRE(outcome.instruction.has_value());
  const auto& instr = *outcome.instruction;

  // Z xor pad equals the sender-side material named by the request.
  const Bytes& bob_table = rig.raw["hub1"]["bob"];
  Bytes pad(bob_table.begin() + instr.slice.start,
            bob_table.begin() + instr.slice.start + instr.slice.length);
  const Bytes& alice_table = rig.raw["hub1"]["alice"];
  Bytes expected(alice_table.begin() + request.share_slice.start,
                 alice_table.begin() + request.share_slice.start + request.share_slice.length);
  CHECK(xor_bytes(ByteView(instr.encrypted_share), ByteView(pad)) == expected);
  CHECK(instr.key_tag == request.key_tag);
  CHECK(instr.x_coord == request.x_coord);
}

TEST_CASE("a flipped message tag drops the request but consumes its ranges") {
  Rig rig(1);
  auto init = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 32,
                                               rig.front_hubs(1), rig.bob.id());
  auto request = first_request(init);
  request.message_tag.value ^= 0x01;

  std::size_t before = rig.hubs[0].table(rig.alice.id()).used_bytes();
  CHECK(before == 0);
  auto outcome = rig.hubs[0].handle_key_request(request);
  CHECK_FALSE(outcome.instruction.has_value());
  CHECK(outcome.rejection == ErrorCode::tag_invalid);
  // Referenced ranges are consumed even on failure.
  CHECK(rig.hubs[0].table(rig.alice.id()).used_bytes() ==
        request.share_slice.length + request.msg_tag_slice.length);
  // And nothing was taken from the receiver side.
  CHECK(rig.hubs[0].table(rig.bob.id()).used_bytes() == 0);
}

TEST_CASE("a replayed request hits the single-use rule") {
  Rig rig(1);
  auto init = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 32,
                                               rig.front_hubs(1), rig.bob.id());
  auto request = first_request(init);
  CHECK(rig.hubs[0].handle_key_request(request).instruction.has_value());
  auto replayed = rig.hubs[0].handle_key_request(request);
  CHECK_FALSE(replayed.instruction.has_value());
  CHECK(replayed.rejection == ErrorCode::overlap_detected);
}

TEST_CASE("unregistered parties are rejected") {
  Rig rig(1);
  auto init = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 32,
                                               rig.front_hubs(1), rig.bob.id());
  auto request = first_request(init);
  request.sender = PartyId::from_name("mallory");
  auto outcome = rig.hubs[0].handle_key_request(request);
  CHECK(outcome.rejection == ErrorCode::unknown_client);

  auto request2 = first_request(init);
  request2.receiver = PartyId::from_name("mallory");
  CHECK(rig.hubs[0].handle_key_request(request2).rejection == ErrorCode::unknown_client);
}

TEST_CASE("conservation: both tables consume the share plus two tag keys") {
  Rig rig(3);
  const std::size_t m = 40;
  auto init = rig.alice.initiate_key_agreement({3, 2, SchemeKind::shamir}, m,
                                               rig.front_hubs(3), rig.bob.id());
  for (std::size_t i = 0; i < 3; ++i) {
    auto outcome = rig.hubs[i].handle_key_request(init.requests[i].second);
    REQUIRE(outcome.instruction.has_value());
    CHECK(rig.hubs[i].table(rig.alice.id()).used_bytes() == m + 2 * kTagKeyBytes);
    CHECK(rig.hubs[i].table(rig.bob.id()).used_bytes() == m + 2 * kTagKeyBytes);
  }
}

TEST_CASE("identical tables and request give a byte-identical instruction") {
  auto run_once = [] {
    Rig rig(1, 1 << 12, 77);
    auto init = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 16,
                                                 rig.front_hubs(1), rig.bob.id());
    auto outcome = rig.hubs[0].handle_key_request(init.requests[0].second);
    REQUIRE(outcome.instruction.has_value());
    return wire::encode(*outcome.instruction);
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("identity queries are answered with a fresh tag from the querier's table") {
  Rig rig(1);
  auto outcome = rig.hubs[0].handle_identity_query(
      wire::IdentityQuery{rig.bob.id()}, rig.alice.id());
  REQUIRE(outcome.response.has_value());
  std::string expected = "identity:bob";
  CHECK(outcome.response->record == Bytes(expected.begin(), expected.end()));
  CHECK(rig.hubs[0].table(rig.alice.id()).used_bytes() == kTagKeyBytes);

  // The client can verify the tag against its own copy of the table.
  CHECK_FALSE(rig.alice.ingest_identity_response(rig.hub_ids[0], *outcome.response));
}

TEST_CASE("unknown identity subjects are refused") {
  Rig rig(1);
  auto outcome = rig.hubs[0].handle_identity_query(
      wire::IdentityQuery{PartyId::from_name("mallory")}, rig.alice.id());
  CHECK(outcome.rejection == ErrorCode::unknown_subject);
  auto outcome2 = rig.hubs[0].handle_identity_query(wire::IdentityQuery{rig.bob.id()},
                                                    PartyId::from_name("mallory"));
  CHECK(outcome2.rejection == ErrorCode::unknown_client);
}

TEST_CASE("request cap limits one sender") {
  Rig rig(1);
  rig.hubs[0].set_request_cap(1);
  auto first = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 8,
                                                rig.front_hubs(1), rig.bob.id());
  CHECK(rig.hubs[0].handle_key_request(first.requests[0].second).instruction.has_value());
  auto second = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 8,
                                                 rig.front_hubs(1), rig.bob.id());
  CHECK(rig.hubs[0].handle_key_request(second.requests[0].second).rejection ==
        ErrorCode::request_cap_exceeded);
}

TEST_CASE("exhausted receiver-side table rejects the relay") {
  Rig rig(1, 256);
  // The sender side has room for one 64-byte agreement; drain the hub's
  // receiver-side table so the relay allocation fails.
  rig.hubs[0].table(rig.bob.id()).allocate(250);
  auto init = rig.alice.initiate_key_agreement({1, 1, SchemeKind::shamir}, 64,
                                               rig.front_hubs(1), rig.bob.id());
  auto outcome = rig.hubs[0].handle_key_request(init.requests[0].second);
  CHECK(outcome.rejection == ErrorCode::table_exhausted);
}
