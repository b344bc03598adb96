#include "dske/simnet.hpp"

#include <algorithm>
#include <sstream>

#include "dske/bytes.hpp"

namespace dske::sim {

namespace {

std::string reason_name(const std::optional<ErrorCode>& code) {
  return code ? to_string(*code) : "none";
}

// Consistent fake share family used by colluding hubs: a random polynomial of
// degree fake_k - 1 whose constant stream is the fake secret. Every member
// serves the evaluation at its own coordinate, so any fake_k of the forged
// shares reconstruct to the same wrong secret, under a matching fake key tag.
struct FakeRun {
  std::vector<Bytes> coeff;
  Tag key_tag;
  std::uint16_t k = 0;

  Bytes share_at(std::uint8_t x) const { return ShamirEngine::evaluate(coeff, x); }
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  RunReport run() {
    if (cfg_.clients.size() < 2) {
      throw DskeError(ErrorCode::bad_params, "need an initiator and a responder");
    }
    validate_params(cfg_.params);
    if (cfg_.hub_count < cfg_.params.n) {
      throw DskeError(ErrorCode::bad_params, "fewer hubs than n");
    }
    if (cfg_.script.collusion && cfg_.params.kind != SchemeKind::shamir) {
      throw DskeError(ErrorCode::script_error, "collusion scripts need the polynomial scheme");
    }
    provision();
    if (cfg_.query_identity) identity_phase();
    const std::size_t rounds = cfg_.agreements == 0 ? 1 : cfg_.agreements;
    for (std::size_t round = 0; round < rounds; ++round) {
      if (cfg_.adapted) {
        adapted_phase();
      } else {
        general_phase();
      }
    }
    accounting();
    return std::move(report_);
  }

 private:
  struct Event {
    std::uint64_t seq = 0;
    LinkKey link;
    Bytes frame;
  };

  // --- setup -----------------------------------------------------------------

  void provision() {
    std::vector<std::uint64_t> client_seeds;
    for (std::size_t i = 0; i < cfg_.clients.size(); ++i) client_seeds.push_back(rng_.next_u64());

    for (std::size_t i = 0; i < cfg_.clients.size(); ++i) {
      const std::string& name = cfg_.clients[i];
      PartyId id = PartyId::from_name(name);
      names_[id] = name;
      clients_.emplace(name, Client(id, client_seeds[i]));
    }
    for (std::size_t h = 1; h <= cfg_.hub_count; ++h) {
      std::string name = hub_name(h);
      PartyId id = PartyId::from_name(name);
      names_[id] = name;
      Hub hub(id);
      if (cfg_.request_cap != 0) hub.set_request_cap(cfg_.request_cap);
      hubs_.emplace(name, std::move(hub));
    }

    for (std::size_t h = 1; h <= cfg_.hub_count; ++h) {
      Hub& hub = hubs_.at(hub_name(h));
      for (std::size_t c = 0; c < cfg_.clients.size(); ++c) {
        const std::string& client_name = cfg_.clients[c];
        // Always draw from the rng, so overriding one table leaves every
        // other table's contents unchanged.
        Bytes data = rng_.bytes(cfg_.table_bytes);
        if (auto it = cfg_.table_override.find({h, client_name});
            it != cfg_.table_override.end()) {
          data = it->second;
        }
        raw_tables_[hub_name(h)][client_name] = data;
        std::uint64_t table_id = h * 1000 + c;
        PartyId client_id = PartyId::from_name(client_name);
        std::string record_text = "identity:" + client_name;
        Bytes record(record_text.begin(), record_text.end());
        hub.register_client(client_id, record, PskTable(hub.id(), client_id, table_id, data));
        clients_.at(client_name)
            .add_hub_table(hub.id(), PskTable(hub.id(), client_id, table_id, std::move(data)));
      }
    }

    for (const std::string& name : cfg_.clients) {
      Client& client = clients_.at(name);
      client.policy().k_min = cfg_.k_b;
      client.policy().scheme = cfg_.params.kind;
      for (std::size_t h = 1; h <= cfg_.params.n; ++h) {
        client.policy().accepted_hubs.insert(PartyId::from_name(hub_name(h)));
      }
    }

    for (const auto& [name, mode] : cfg_.script.compromised) record_knowledge(name);
    if (cfg_.script.collusion) {
      for (const std::string& name : cfg_.script.collusion->hubs) record_knowledge(name);
    }
  }

  static std::string hub_name(std::size_t index) { return "hub" + std::to_string(index); }

  void record_knowledge(const std::string& name) {
    auto it = raw_tables_.find(name);
    if (it == raw_tables_.end()) return;
    for (const auto& [client_name, data] : it->second) {
      report_.knowledge.push_back("table " + name + "/" + client_name +
                                  " bytes=" + std::to_string(data.size()) +
                                  " digest=" + std::to_string(digest64(ByteView(data))));
    }
  }

  std::vector<PartyId> protocol_hub_ids() const {
    std::vector<PartyId> ids;
    for (std::size_t h = 1; h <= cfg_.params.n; ++h) ids.push_back(PartyId::from_name(hub_name(h)));
    return ids;
  }

  // --- protocol phases ---------------------------------------------------------

  void identity_phase() {
    for (const std::string& querier : cfg_.clients) {
      for (const std::string& subject : cfg_.clients) {
        if (querier == subject) continue;
        wire::IdentityQuery q{PartyId::from_name(subject)};
        for (std::size_t h = 1; h <= cfg_.params.n; ++h) {
          send(querier, hub_name(h), wire::encode(q));
        }
      }
    }
    pump();
    for (const std::string& querier : cfg_.clients) {
      for (const std::string& subject : cfg_.clients) {
        if (querier == subject) continue;
        auto outcome = clients_.at(querier).conclude_identity_query(PartyId::from_name(subject));
        if (outcome.error) {
          note_reject(querier, *outcome.error);
          log("identity " + querier + " subject=" + subject + " no-consensus");
        } else {
          std::string line = "identity " + querier + " subject=" + subject + " record-digest=" +
                             std::to_string(digest64(ByteView(*outcome.record)));
          for (const PartyId& d : outcome.dissenters) line += " excluded=" + names_.at(d);
          log(line);
        }
      }
    }
  }

  void set_outcome(const std::string& who, const AgreedKey& key) {
    PartyOutcome out;
    out.agreed = key.status == AgreedKey::Status::agreed;
    out.abort_reason = key.abort_reason;
    out.secret = key.secret;
    if (out.agreed) {
      log("outcome " + who + " agreed digest=" + std::to_string(digest64(ByteView(out.secret))));
    } else {
      log("outcome " + who + " aborted reason=" + reason_name(key.abort_reason));
    }
    report_.outcomes[who] = std::move(out);
  }

  void set_aborted(const std::string& who, ErrorCode code) {
    AgreedKey key;
    key.status = AgreedKey::Status::aborted;
    key.abort_reason = code;
    set_outcome(who, key);
  }

  void general_phase() {
    const std::string& alice = cfg_.clients[0];
    const std::string& bob = cfg_.clients[1];
    Client::Initiation init;
    try {
      init = clients_.at(alice).initiate_key_agreement(
          cfg_.params, cfg_.key_bytes, protocol_hub_ids(), PartyId::from_name(bob));
    } catch (const DskeError& e) {
      set_aborted(alice, e.code());
      set_aborted(bob, ErrorCode::insufficient_shares);
      return;
    }
    {
      AgreedKey hers;
      hers.key_id = init.key_id;
      hers.status = AgreedKey::Status::agreed;
      auto bits = init.secret.key_bits(kTagKeyBytes);
      hers.secret = Bytes(bits.begin(), bits.end());
      set_outcome(alice, hers);
    }
    for (std::size_t i = 0; i < init.requests.size(); ++i) {
      send(alice, hub_name(i + 1), wire::encode(init.requests[i].second));
    }
    pump();
    run_post_actions();
    pump();
    set_outcome(bob, clients_.at(bob).reconstruct_and_validate(init.key_id));
  }

  void adapted_phase() {
    const std::string& alice = cfg_.clients[0];
    const std::string& bob = cfg_.clients[1];
    Client& a = clients_.at(alice);
    Client& b = clients_.at(bob);
    const PartyId bob_id = PartyId::from_name(bob);
    auto hubs = protocol_hub_ids();

    // First pass: a short bootstrap key via the full protocol.
    Client::Initiation boot;
    try {
      boot = a.initiate_key_agreement(cfg_.params, BootstrapKey::required_bytes(cfg_.params.n),
                                      hubs, bob_id);
    } catch (const DskeError& e) {
      set_aborted(alice, e.code());
      set_aborted(bob, ErrorCode::insufficient_shares);
      return;
    }
    for (std::size_t i = 0; i < boot.requests.size(); ++i) {
      send(alice, hub_name(i + 1), wire::encode(boot.requests[i].second));
    }
    pump();
    AgreedKey boot_key = b.reconstruct_and_validate(boot.key_id);
    log("bootstrap " + bob +
        (boot_key.status == AgreedKey::Status::agreed
             ? std::string(" agreed")
             : " aborted reason=" + reason_name(boot_key.abort_reason)));
    if (boot_key.status != AgreedKey::Status::agreed) {
      set_aborted(alice, ErrorCode::insufficient_valid_shares);
      set_aborted(bob, boot_key.abort_reason.value_or(ErrorCode::insufficient_shares));
      return;
    }
    if (auto err = b.arm_negotiation_receiver(boot.key_id, cfg_.params, hubs)) {
      set_aborted(bob, *err);
      set_aborted(alice, ErrorCode::insufficient_valid_shares);
      return;
    }
    auto alice_boot = a.fetch_key(boot.key_id);

    // Second pass: untagged table pass-through shares.
    Client::Initiation raw;
    try {
      raw = a.initiate_raw_distribution(cfg_.params, cfg_.key_bytes, hubs, bob_id);
    } catch (const DskeError& e) {
      set_aborted(alice, e.code());
      set_aborted(bob, ErrorCode::insufficient_shares);
      return;
    }
    a.arm_negotiation_initiator(raw, ByteView(*alice_boot));
    for (std::size_t i = 0; i < raw.requests.size(); ++i) {
      send(alice, hub_name(i + 1), wire::encode(raw.requests[i].second));
    }
    pump();
    run_post_actions();
    pump();

    // Bilateral negotiation over the unprotected client-client link.
    auto negotiation = b.adapted_negotiate(raw.key_id);
    if (negotiation.error) {
      set_aborted(bob, *negotiation.error);
      set_aborted(alice, ErrorCode::insufficient_valid_shares);
      return;
    }
    send(bob, alice, wire::encode(*negotiation.message));
    pump();
    if (!inbox_negotiation_) {
      set_aborted(alice, ErrorCode::insufficient_valid_shares);
      set_aborted(bob, ErrorCode::insufficient_valid_shares);
      return;
    }
    auto finalize = a.adapted_finalize(*inbox_negotiation_);
    report_.bootstrap_consumed_initiator = a.initiator_bootstrap_consumed();
    report_.bootstrap_consumed_receiver = b.receiver_bootstrap_consumed();
    if (finalize.error) {
      set_aborted(alice, *finalize.error);
      set_aborted(bob, ErrorCode::insufficient_valid_shares);
      return;
    }
    {
      AgreedKey hers;
      hers.key_id = raw.key_id;
      hers.status = AgreedKey::Status::agreed;
      hers.secret = finalize.secret;
      hers.contributing_x = finalize.accepted_x;
      set_outcome(alice, hers);
    }
    send(alice, bob, wire::encode(*finalize.message));
    pump();
    if (!inbox_finalize_) {
      set_aborted(bob, ErrorCode::insufficient_valid_shares);
      return;
    }
    set_outcome(bob, b.adapted_complete(*inbox_finalize_));
    report_.bootstrap_consumed_receiver = b.receiver_bootstrap_consumed();
  }

  void accounting() {
    for (std::size_t h = 1; h <= cfg_.hub_count; ++h) {
      Hub& hub = hubs_.at(hub_name(h));
      for (const std::string& client_name : cfg_.clients) {
        PartyId client_id = PartyId::from_name(client_name);
        report_.table_used[hub_name(h) + "/" + client_name + "/hub"] =
            hub.table(client_id).used_bytes();
        report_.table_used[hub_name(h) + "/" + client_name + "/client"] =
            clients_.at(client_name).table(hub.id()).used_bytes();
      }
    }
    report_.knowledge.push_back("frames observed=" + std::to_string(frames_seen_));
  }

  // --- transport and adversary ---------------------------------------------------

  void enqueue(const LinkKey& link, Bytes frame) {
    queue_.push_back(Event{seq_++, link, std::move(frame)});
  }

  void send(const std::string& from, const std::string& to, Bytes frame) {
    LinkKey link{from, to};
    history_[link].push_back(frame);
    if (cfg_.record_frames) report_.observed_frames.emplace_back(link, frame);
    ++frames_seen_;

    LinkAction action;  // defaults to deliver
    std::size_t index = action_cursor_[link]++;
    if (auto it = cfg_.script.link_actions.find(link);
        it != cfg_.script.link_actions.end() && index < it->second.size()) {
      action = it->second[index];
    }

    switch (action.kind) {
      case LinkAction::Kind::deliver:
        log("send " + from + "->" + to + " len=" + std::to_string(frame.size()));
        enqueue(link, std::move(frame));
        break;
      case LinkAction::Kind::drop:
        log("adversary drop " + from + "->" + to + " len=" + std::to_string(frame.size()));
        break;
      case LinkAction::Kind::corrupt: {
        Bytes mutated = std::move(frame);
        for (std::size_t pos : action.corrupt_positions) {
          if (!mutated.empty()) mutated[pos % mutated.size()] ^= 0xFF;
        }
        log("adversary corrupt " + from + "->" + to +
            " positions=" + std::to_string(action.corrupt_positions.size()));
        enqueue(link, std::move(mutated));
        break;
      }
      case LinkAction::Kind::replay: {
        log("adversary replay " + from + "->" + to +
            " index=" + std::to_string(action.replay_index));
        enqueue(link, std::move(frame));
        const auto& past = history_[link];
        if (action.replay_index < past.size()) enqueue(link, past[action.replay_index]);
        break;
      }
      case LinkAction::Kind::inject:
        log("adversary inject " + from + "->" + to +
            " len=" + std::to_string(action.inject_frame.size()));
        enqueue(link, std::move(frame));
        enqueue(link, action.inject_frame);
        break;
      case LinkAction::Kind::reorder:
        log("adversary hold " + from + "->" + to);
        held_[link] = std::move(frame);
        return;  // released after the next frame on this link
    }
    if (auto held = held_.find(link); held != held_.end()) {
      log("adversary release-held " + from + "->" + to);
      Bytes released = std::move(held->second);
      held_.erase(held);
      enqueue(link, std::move(released));
    }
  }

  bool flush_holds() {
    if (held_.empty()) return false;
    for (auto& [link, frame] : held_) {
      log("adversary flush-held " + link.from + "->" + link.to);
      enqueue(link, std::move(frame));
    }
    held_.clear();
    return true;
  }

  void pump() {
    while (true) {
      if (queue_.empty()) {
        if (!flush_holds()) break;
        continue;
      }
      Event e = std::move(queue_.front());
      queue_.pop_front();
      deliver(e.link, e.frame);
    }
  }

  void run_post_actions() {
    if (post_actions_done_) return;
    post_actions_done_ = true;
    for (const PostAction& action : cfg_.script.post_actions) {
      if (action.kind == PostAction::Kind::replay) {
        const auto& past = history_[action.source];
        if (action.index >= past.size()) {
          log("post replay source-empty " + action.source.from + "->" + action.source.to);
          continue;
        }
        log("post replay to " + action.target.from + "->" + action.target.to);
        enqueue(action.target, past[action.index]);
      } else {
        log("post inject to " + action.target.from + "->" + action.target.to);
        enqueue(action.target, action.inject_frame);
      }
    }
  }

  void deliver(const LinkKey& link, const Bytes& frame) {
    if (hubs_.contains(link.to)) {
      deliver_to_hub(link.to, link, frame);
    } else if (clients_.contains(link.to)) {
      deliver_to_client(link.to, link, frame);
    } else {
      log("deliver unknown-party " + link.to);
    }
  }

  HubMode mode_of(const std::string& name) const {
    auto it = cfg_.script.compromised.find(name);
    return it == cfg_.script.compromised.end() ? HubMode::observe : it->second;
  }

  bool in_collusion(const std::string& name) const {
    if (!cfg_.script.collusion) return false;
    const auto& hubs = cfg_.script.collusion->hubs;
    return std::find(hubs.begin(), hubs.end(), name) != hubs.end();
  }

  void deliver_to_hub(const std::string& name, const LinkKey& link, const Bytes& frame) {
    wire::Message message;
    try {
      message = wire::decode(frame);
    } catch (const DskeError& e) {
      note_reject(name, e.code());
      return;
    }
    Hub& hub = hubs_.at(name);
    const HubMode mode = mode_of(name);

    if (cfg_.script.compromised.contains(name) && mode == HubMode::drop) {
      log("hub " + name + " silently drops");
      return;
    }

    if (const auto* query = std::get_if<wire::IdentityQuery>(&message)) {
      auto outcome = hub.handle_identity_query(*query, PartyId::from_name(link.from));
      if (outcome.rejection) {
        note_reject(name, *outcome.rejection);
        return;
      }
      wire::IdentityResponse response = std::move(*outcome.response);
      if (cfg_.script.compromised.contains(name) && mode == HubMode::identity_lie) {
        std::string forged = "forged-identity";
        response.record.assign(forged.begin(), forged.end());
        reseal_response(name, link.from, response);
        log("hub " + name + " lies about identity");
      }
      send(name, link.from, wire::encode(response));
      return;
    }

    const auto* request = std::get_if<wire::KeyRequestMessage>(&message);
    if (request == nullptr) {
      note_reject(name, ErrorCode::unknown_message_type);
      return;
    }
    auto outcome = hub.handle_key_request(*request);
    if (outcome.rejection) {
      note_reject(name, *outcome.rejection);
      return;
    }
    wire::KeyInstructionMessage instruction = std::move(*outcome.instruction);
    auto receiver_it = names_.find(request->receiver);
    if (receiver_it == names_.end()) {
      log("hub " + name + " unknown receiver");
      return;
    }
    const std::string& receiver = receiver_it->second;

    if (in_collusion(name)) {
      const Collusion& collusion = *cfg_.script.collusion;
      std::uint16_t fake_k = collusion.fake_k != 0 ? collusion.fake_k : request->k;
      FakeRun& fake =
          fake_run(request->key_id, instruction.slice.length, fake_k, request->key_tag.has_value());
      if (collusion.keep_honest) {
        send(name, receiver, wire::encode(instruction));
        wire::KeyInstructionMessage forged =
            forge_fresh(name, receiver, instruction, fake.share_at(instruction.x_coord), fake);
        log("hub " + name + " adds consistent fake share k=" + std::to_string(fake.k));
        send(name, receiver, wire::encode(forged));
      } else {
        wire::KeyInstructionMessage forged = forge_in_place(
            name, receiver, std::move(instruction), fake.share_at(instruction.x_coord), fake);
        log("hub " + name + " substitutes consistent fake share k=" + std::to_string(fake.k));
        send(name, receiver, wire::encode(forged));
      }
      return;
    }
    if (cfg_.script.compromised.contains(name) && mode == HubMode::corrupt_share) {
      Bytes junk = rng_.bytes(instruction.slice.length);
      wire::KeyInstructionMessage forged =
          rewrite_instruction(name, receiver, std::move(instruction), ByteView(junk));
      log("hub " + name + " relays a corrupted share under a valid tag");
      send(name, receiver, wire::encode(forged));
      return;
    }
    send(name, receiver, wire::encode(instruction));
  }

  void deliver_to_client(const std::string& name, const LinkKey& link, const Bytes& frame) {
    wire::Message message;
    try {
      message = wire::decode(frame);
    } catch (const DskeError& e) {
      note_reject(name, e.code());
      return;
    }
    Client& client = clients_.at(name);
    if (const auto* instruction = std::get_if<wire::KeyInstructionMessage>(&message)) {
      auto rejection = client.receive_instruction(*instruction);
      if (rejection) {
        note_reject(name, *rejection);
      } else {
        log("client " + name + " stores share x=" + std::to_string(instruction->x_coord) +
            " from " + link.from);
      }
      return;
    }
    if (const auto* response = std::get_if<wire::IdentityResponse>(&message)) {
      auto rejection = client.ingest_identity_response(PartyId::from_name(link.from), *response);
      if (rejection) note_reject(name, *rejection);
      return;
    }
    if (const auto* negotiation = std::get_if<wire::NegotiationMessage>(&message)) {
      if (name == cfg_.clients[0] && !inbox_negotiation_) {
        inbox_negotiation_ = *negotiation;
      } else {
        log("client " + name + " ignores extra negotiation frame");
      }
      return;
    }
    if (const auto* finalize = std::get_if<wire::FinalizeMessage>(&message)) {
      if (name == cfg_.clients[1] && !inbox_finalize_) {
        inbox_finalize_ = *finalize;
      } else {
        log("client " + name + " ignores extra finalize frame");
      }
      return;
    }
    note_reject(name, ErrorCode::unknown_message_type);
  }

  // --- compromised-hub forgeries ---------------------------------------------

  ByteView raw_range(const std::string& hub, const std::string& client, std::uint64_t start,
                     std::uint64_t length) {
    const Bytes& data = raw_tables_.at(hub).at(client);
    return ByteView(data).subspan(start, length);
  }

  FakeRun& fake_run(const KeyId& key_id, std::size_t share_len, std::uint16_t fake_k,
                    bool with_tag) {
    auto it = fake_runs_.find(key_id);
    if (it != fake_runs_.end()) return it->second;
    FakeRun run;
    run.k = fake_k;
    run.coeff.reserve(fake_k);
    for (std::uint16_t j = 0; j < fake_k; ++j) run.coeff.push_back(rng_.bytes(share_len));
    if (with_tag) {
      SecretBundle fake_secret{run.coeff[0]};
      run.key_tag = compute_tag(TagKey::from_bytes(fake_secret.tag_key(kTagKeyBytes)),
                                fake_secret.key_bits(kTagKeyBytes));
    }
    return fake_runs_.emplace(key_id, std::move(run)).first->second;
  }

  // Rewrite an instruction in place, reusing its slice references; pad and tag
  // key are read straight out of the compromised hub's table copy.
  wire::KeyInstructionMessage rewrite_instruction(const std::string& hub,
                                                  const std::string& receiver,
                                                  wire::KeyInstructionMessage msg,
                                                  ByteView new_share) {
    ByteView pad = raw_range(hub, receiver, msg.slice.start, msg.slice.length);
    msg.encrypted_share = xor_bytes(new_share, pad);
    ByteView tag_key =
        raw_range(hub, receiver, msg.msg_tag_slice.start, msg.msg_tag_slice.length);
    Bytes frame = wire::encode(msg);
    msg.message_tag = wire::seal_frame(frame, TagKey::from_bytes(tag_key));
    return msg;
  }

  wire::KeyInstructionMessage forge_in_place(const std::string& hub, const std::string& receiver,
                                             wire::KeyInstructionMessage msg,
                                             const Bytes& fake_share, const FakeRun& fake) {
    msg.k = fake.k;
    if (msg.key_tag) msg.key_tag = fake.key_tag;
    return rewrite_instruction(hub, receiver, std::move(msg), ByteView(fake_share));
  }

  // Same forgery on freshly allocated table ranges, so the honest instruction
  // and the fake one can both be accepted by the receiver.
  wire::KeyInstructionMessage forge_fresh(const std::string& hub_id, const std::string& receiver,
                                          const wire::KeyInstructionMessage& real,
                                          const Bytes& fake_share, const FakeRun& fake) {
    Hub& hub = hubs_.at(hub_id);
    PskTable& table = hub.table(PartyId::from_name(receiver));
    KeySlice pad = table.allocate(real.slice.length);
    KeySlice tag_material = table.allocate(kTagKeyBytes);
    wire::KeyInstructionMessage msg = real;
    msg.k = fake.k;
    if (msg.key_tag) msg.key_tag = fake.key_tag;
    msg.slice = wire::SliceRef{pad.table_id, pad.start, pad.length()};
    msg.encrypted_share = xor_bytes(ByteView(fake_share), ByteView(pad.bytes));
    msg.msg_tag_slice =
        wire::SliceRef{tag_material.table_id, tag_material.start, tag_material.length()};
    Bytes frame = wire::encode(msg);
    msg.message_tag = wire::seal_frame(frame, TagKey::from_bytes(ByteView(tag_material.bytes)));
    return msg;
  }

  void reseal_response(const std::string& hub, const std::string& client,
                       wire::IdentityResponse& response) {
    ByteView tag_key =
        raw_range(hub, client, response.msg_tag_slice.start, response.msg_tag_slice.length);
    Bytes frame = wire::encode(response);
    response.message_tag = wire::seal_frame(frame, TagKey::from_bytes(tag_key));
  }

  // --- reporting ----------------------------------------------------------------

  void log(std::string line) { report_.trace.push_back(std::move(line)); }

  void note_reject(const std::string& who, ErrorCode code) {
    ++report_.rejections[std::string(to_string(code))];
    log("reject " + who + " reason=" + to_string(code));
  }

  const ScenarioConfig& cfg_;
  Rng rng_;
  std::map<std::string, Hub> hubs_;
  std::map<std::string, Client> clients_;
  std::map<PartyId, std::string> names_;
  std::map<std::string, std::map<std::string, Bytes>> raw_tables_;
  std::deque<Event> queue_;
  std::uint64_t seq_ = 0;
  std::size_t frames_seen_ = 0;
  bool post_actions_done_ = false;
  std::map<LinkKey, std::vector<Bytes>> history_;
  std::map<LinkKey, std::size_t> action_cursor_;
  std::map<LinkKey, Bytes> held_;
  std::map<KeyId, FakeRun> fake_runs_;
  std::optional<wire::NegotiationMessage> inbox_negotiation_;
  std::optional<wire::FinalizeMessage> inbox_finalize_;
  RunReport report_;
};

}  // namespace

bool RunReport::agreed_and_equal() const {
  if (outcomes.size() < 2) return false;
  const Bytes* first = nullptr;
  for (const auto& [name, outcome] : outcomes) {
    if (!outcome.agreed) return false;
    if (first == nullptr) {
      first = &outcome.secret;
    } else if (outcome.secret != *first) {
      return false;
    }
  }
  return true;
}

std::string RunReport::serialize() const {
  std::ostringstream out;
  for (const auto& [name, outcome] : outcomes) {
    out << "outcome " << name;
    if (outcome.agreed) {
      out << " agreed digest=" << digest64(ByteView(outcome.secret));
    } else {
      out << " aborted reason=" << reason_name(outcome.abort_reason);
    }
    out << "\n";
  }
  for (const auto& [key, used] : table_used) out << "used " << key << " bytes=" << used << "\n";
  for (const auto& [reason, count] : rejections) {
    out << "rejections " << reason << " count=" << count << "\n";
  }
  for (const std::string& line : knowledge) out << "knowledge " << line << "\n";
  for (const std::string& line : trace) out << "trace " << line << "\n";
  return out.str();
}

RunReport run_scenario(const ScenarioConfig& config) { return Simulation(config).run(); }

RunReport run_replay_attack(const ScenarioConfig& config, const LinkKey& capture_link,
                            std::size_t frame_index, const LinkKey& target_link) {
  ScenarioConfig first = config;
  first.record_frames = true;
  RunReport capture = run_scenario(first);
  Bytes captured;
  std::size_t remaining = frame_index;
  for (const auto& [link, frame] : capture.observed_frames) {
    if (link == capture_link) {
      if (remaining == 0) {
        captured = frame;
        break;
      }
      --remaining;
    }
  }
  if (captured.empty()) {
    throw DskeError(ErrorCode::script_error, "no frame captured on the requested link");
  }
  ScenarioConfig second = config;
  PostAction splice;
  splice.kind = PostAction::Kind::inject;
  splice.target = target_link;
  splice.inject_frame = captured;
  second.script.post_actions.push_back(splice);
  return run_scenario(second);
}

}  // namespace dske::sim
