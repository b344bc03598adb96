#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dske/client.hpp"
#include "dske/hub.hpp"
#include "dske/rng.hpp"

// Deterministic in-process network: hubs and clients exchange encoded frames
// through an event queue under logical time, with a scriptable adversary
// sitting on every link. Identical (topology, script, seed) inputs replay to
// byte-identical traces.

namespace dske::sim {

struct LinkKey {
  std::string from;
  std::string to;

  auto operator<=>(const LinkKey&) const = default;
};

// Per-frame interference on a link. The i-th frame crossing the link is
// subject to the i-th action; later frames pass untouched.
struct LinkAction {
  enum class Kind : std::uint8_t { deliver, drop, corrupt, replay, inject, reorder };
  Kind kind = Kind::deliver;
  std::vector<std::size_t> corrupt_positions;  // byte offsets, taken mod frame size
  std::size_t replay_index = 0;                // which captured frame to duplicate
  Bytes inject_frame;                          // raw frame to add after this one
};

// Fired once the protocol is quiescent: splice a captured or crafted frame
// onto a link, possibly a different one than it was captured on.
struct PostAction {
  enum class Kind : std::uint8_t { replay, inject };
  Kind kind = Kind::replay;
  LinkKey target;
  LinkKey source;          // for replay: where the frame was captured
  std::size_t index = 0;   // which captured frame
  Bytes inject_frame;
};

// What a compromised hub does with the traffic it controls.
enum class HubMode : std::uint8_t {
  observe,        // honest-but-curious: full knowledge, honest behavior
  drop,           // answers nothing
  corrupt_share,  // relays a random wrong share under a valid message tag
  identity_lie,   // serves a conflicting identity record
};

// A colluding group substituting shares consistent with a fake secret, under
// a matching fake key tag. keep_honest additionally relays the true
// instruction, putting two complete candidates in front of the receiver.
struct Collusion {
  std::vector<std::string> hubs;
  std::uint16_t fake_k = 0;  // threshold claimed in the forged messages; 0 keeps the real k
  bool keep_honest = false;
};

struct AdversaryScript {
  std::map<std::string, HubMode> compromised;
  std::optional<Collusion> collusion;
  std::map<LinkKey, std::vector<LinkAction>> link_actions;
  std::vector<PostAction> post_actions;
};

struct ScenarioConfig {
  std::size_t hub_count = 3;
  std::vector<std::string> clients = {"alice", "bob"};  // [0] initiates, [1] responds
  std::size_t table_bytes = 1 << 14;
  SchemeParams params{3, 2, SchemeKind::shamir};
  std::uint16_t k_b = 1;
  std::size_t key_bytes = 64;
  bool adapted = false;
  bool query_identity = false;
  std::uint64_t seed = 1;
  std::uint64_t request_cap = 0;
  std::size_t agreements = 1;  // how many agreements the initiator attempts
  bool record_frames = false;  // keep raw frame bytes in the report
  AdversaryScript script;
  // Test hook: explicit contents for selected tables, keyed by
  // (hub index starting at 1, client name).
  std::map<std::pair<std::size_t, std::string>, Bytes> table_override;
};

struct PartyOutcome {
  bool agreed = false;
  std::optional<ErrorCode> abort_reason;
  Bytes secret;
};

struct RunReport {
  std::map<std::string, PartyOutcome> outcomes;
  std::map<std::string, std::size_t> table_used;  // "hub/client/side" -> bytes
  std::map<std::string, std::size_t> rejections;  // diagnostic -> count
  std::vector<std::string> knowledge;             // adversary knowledge ledger
  std::vector<std::string> trace;
  std::vector<std::pair<LinkKey, Bytes>> observed_frames;  // when record_frames
  std::size_t bootstrap_consumed_initiator = 0;            // negotiated flow only
  std::size_t bootstrap_consumed_receiver = 0;

  bool agreed_and_equal() const;
  std::string serialize() const;
};

RunReport run_scenario(const ScenarioConfig& config);

// Captures a frame from a first run and splices it into a second run of the
// same configuration. Returns the second run's report.
RunReport run_replay_attack(const ScenarioConfig& config, const LinkKey& capture_link,
                            std::size_t frame_index, const LinkKey& target_link);

}  // namespace dske::sim
