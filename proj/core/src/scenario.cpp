#include "dske/scenario.hpp"

#include <fstream>
#include <sstream>

namespace dske::sim {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw DskeError(ErrorCode::script_error,
                  "line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) fail(line_no, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line_no, "bad number '" + s + "'");
  }
}

LinkKey parse_link(const std::string& s, std::size_t line_no) {
  auto arrow = s.find("->");
  if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= s.size()) {
    fail(line_no, "bad link '" + s + "', expected from->to");
  }
  return LinkKey{s.substr(0, arrow), s.substr(arrow + 2)};
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string current;
  for (char c : s) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

LinkAction parse_link_action(const std::string& token, std::size_t line_no) {
  LinkAction action;
  if (token == "deliver") {
    action.kind = LinkAction::Kind::deliver;
  } else if (token == "drop") {
    action.kind = LinkAction::Kind::drop;
  } else if (token == "reorder") {
    action.kind = LinkAction::Kind::reorder;
  } else if (token.rfind("corrupt=", 0) == 0) {
    action.kind = LinkAction::Kind::corrupt;
    for (const std::string& p : split_commas(token.substr(8))) {
      action.corrupt_positions.push_back(parse_u64(p, line_no));
    }
    if (action.corrupt_positions.empty()) fail(line_no, "corrupt needs byte positions");
  } else if (token.rfind("replay=", 0) == 0) {
    action.kind = LinkAction::Kind::replay;
    action.replay_index = parse_u64(token.substr(7), line_no);
  } else if (token.rfind("inject=", 0) == 0) {
    action.kind = LinkAction::Kind::inject;
    try {
      action.inject_frame = from_hex(token.substr(7));
    } catch (const DskeError&) {
      fail(line_no, "inject needs hex bytes");
    }
  } else {
    fail(line_no, "unknown link action '" + token + "'");
  }
  return action;
}

}  // namespace

std::optional<ErrorCode> error_code_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::script_error); ++i) {
    auto code = static_cast<ErrorCode>(i);
    if (name == to_string(code)) return code;
  }
  return std::nullopt;
}

Scenario parse_scenario(const std::string& text) {
  Scenario scenario;
  ScenarioConfig& cfg = scenario.config;

  std::istringstream in(text);
  std::string raw_line;
  std::size_t line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    auto hash = raw_line.find('#');
    if (hash != std::string::npos) raw_line.erase(hash);
    auto tokens = tokenize(raw_line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    auto need = [&](std::size_t count) {
      if (tokens.size() < count + 1) fail(line_no, "'" + key + "' needs more arguments");
    };

    if (key == "name") {
      need(1);
      scenario.name = tokens[1];
    } else if (key == "hubs") {
      need(1);
      cfg.hub_count = parse_u64(tokens[1], line_no);
    } else if (key == "clients") {
      need(2);
      cfg.clients.assign(tokens.begin() + 1, tokens.end());
    } else if (key == "table-bytes") {
      need(1);
      cfg.table_bytes = parse_u64(tokens[1], line_no);
    } else if (key == "seed") {
      need(1);
      cfg.seed = parse_u64(tokens[1], line_no);
    } else if (key == "agreements") {
      need(1);
      cfg.agreements = parse_u64(tokens[1], line_no);
    } else if (key == "n") {
      need(1);
      cfg.params.n = static_cast<std::uint16_t>(parse_u64(tokens[1], line_no));
    } else if (key == "k") {
      need(1);
      cfg.params.k = static_cast<std::uint16_t>(parse_u64(tokens[1], line_no));
    } else if (key == "kb") {
      need(1);
      cfg.k_b = static_cast<std::uint16_t>(parse_u64(tokens[1], line_no));
    } else if (key == "m") {
      need(1);
      cfg.key_bytes = parse_u64(tokens[1], line_no);
    } else if (key == "scheme") {
      need(1);
      if (tokens[1] == "shamir") {
        cfg.params.kind = SchemeKind::shamir;
      } else if (tokens[1] == "xor") {
        cfg.params.kind = SchemeKind::xor_all;
      } else {
        fail(line_no, "scheme must be shamir or xor");
      }
    } else if (key == "adapted") {
      need(1);
      cfg.adapted = parse_u64(tokens[1], line_no) != 0;
    } else if (key == "query-identity") {
      need(1);
      cfg.query_identity = parse_u64(tokens[1], line_no) != 0;
    } else if (key == "request-cap") {
      need(1);
      cfg.request_cap = parse_u64(tokens[1], line_no);
    } else if (key == "compromise") {
      need(2);
      HubMode mode;
      if (tokens[2] == "observe") {
        mode = HubMode::observe;
      } else if (tokens[2] == "drop") {
        mode = HubMode::drop;
      } else if (tokens[2] == "corrupt-share") {
        mode = HubMode::corrupt_share;
      } else if (tokens[2] == "identity-lie") {
        mode = HubMode::identity_lie;
      } else {
        fail(line_no, "unknown compromise mode '" + tokens[2] + "'");
      }
      cfg.script.compromised[tokens[1]] = mode;
    } else if (key == "collude") {
      need(1);
      Collusion collusion;
      collusion.hubs = split_commas(tokens[1]);
      if (collusion.hubs.empty()) fail(line_no, "collude needs hubs");
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (tokens[i].rfind("fake-k=", 0) == 0) {
          collusion.fake_k = static_cast<std::uint16_t>(parse_u64(tokens[i].substr(7), line_no));
        } else if (tokens[i].rfind("keep-honest=", 0) == 0) {
          collusion.keep_honest = parse_u64(tokens[i].substr(12), line_no) != 0;
        } else {
          fail(line_no, "unknown collude option '" + tokens[i] + "'");
        }
      }
      cfg.script.collusion = std::move(collusion);
    } else if (key == "link") {
      need(2);
      LinkKey link = parse_link(tokens[1], line_no);
      cfg.script.link_actions[link].push_back(parse_link_action(tokens[2], line_no));
    } else if (key == "post-replay") {
      need(3);
      PostAction action;
      action.kind = PostAction::Kind::replay;
      action.target = parse_link(tokens[1], line_no);
      action.source = parse_link(tokens[2], line_no);
      action.index = parse_u64(tokens[3], line_no);
      cfg.script.post_actions.push_back(std::move(action));
    } else if (key == "post-inject") {
      need(2);
      PostAction action;
      action.kind = PostAction::Kind::inject;
      action.target = parse_link(tokens[1], line_no);
      try {
        action.inject_frame = from_hex(tokens[2]);
      } catch (const DskeError&) {
        fail(line_no, "post-inject needs hex bytes");
      }
      cfg.script.post_actions.push_back(std::move(action));
    } else if (key == "expect") {
      need(1);
      Expectation e;
      if (tokens[1] == "match") {
        e.kind = Expectation::Kind::match;
      } else if (tokens[1] == "mismatch") {
        e.kind = Expectation::Kind::mismatch;
      } else if (tokens[1] == "no-wrong-key") {
        e.kind = Expectation::Kind::no_wrong_key;
      } else if (tokens[1] == "reject") {
        need(2);
        e.kind = Expectation::Kind::reject_seen;
        e.reason = error_code_from_name(tokens[2]);
        if (!e.reason) fail(line_no, "unknown rejection reason '" + tokens[2] + "'");
      } else {
        need(2);
        e.party = tokens[1];
        if (tokens[2] == "agreed") {
          e.kind = Expectation::Kind::party_agreed;
        } else if (tokens[2] == "aborted") {
          e.kind = Expectation::Kind::party_aborted;
          if (tokens.size() > 3) {
            e.reason = error_code_from_name(tokens[3]);
            if (!e.reason) fail(line_no, "unknown abort reason '" + tokens[3] + "'");
          }
        } else {
          fail(line_no, "expect <party> agreed|aborted [Reason]");
        }
      }
      scenario.expectations.push_back(std::move(e));
    } else {
      fail(line_no, "unknown statement '" + key + "'");
    }
  }
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DskeError(ErrorCode::script_error, "cannot open scenario " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

Verdict check_expectations(const Scenario& scenario, const RunReport& report) {
  Verdict verdict;
  auto record = [&](bool ok, const std::string& what) {
    verdict.pass = verdict.pass && ok;
    verdict.lines.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
  };

  for (const Expectation& e : scenario.expectations) {
    switch (e.kind) {
      case Expectation::Kind::party_agreed: {
        auto it = report.outcomes.find(e.party);
        record(it != report.outcomes.end() && it->second.agreed, e.party + " agreed");
        break;
      }
      case Expectation::Kind::party_aborted: {
        auto it = report.outcomes.find(e.party);
        bool ok = it != report.outcomes.end() && !it->second.agreed;
        std::string what = e.party + " aborted";
        if (e.reason) {
          ok = ok && it->second.abort_reason == *e.reason;
          what += std::string(" reason=") + to_string(*e.reason);
        }
        record(ok, what);
        break;
      }
      case Expectation::Kind::match:
        record(report.agreed_and_equal(), "all parties agreed on one key");
        break;
      case Expectation::Kind::mismatch: {
        bool all_agreed = !report.outcomes.empty();
        for (const auto& [name, outcome] : report.outcomes) {
          all_agreed = all_agreed && outcome.agreed;
        }
        record(all_agreed && !report.agreed_and_equal(), "parties agreed on different keys");
        break;
      }
      case Expectation::Kind::reject_seen: {
        auto it = report.rejections.find(to_string(*e.reason));
        record(it != report.rejections.end() && it->second > 0,
               std::string("rejection seen: ") + to_string(*e.reason));
        break;
      }
      case Expectation::Kind::no_wrong_key: {
        bool all_agreed = !report.outcomes.empty();
        for (const auto& [name, outcome] : report.outcomes) {
          all_agreed = all_agreed && outcome.agreed;
        }
        record(!(all_agreed && !report.agreed_and_equal()), "no silent wrong key");
        break;
      }
    }
  }
  return verdict;
}

}  // namespace dske::sim
