#pragma once

#include <string>
#include <vector>

#include "dske/simnet.hpp"

// Declarative scenario scripts: one key/value statement per line, `#` starts
// a comment. The full grammar is documented in the repository README; in
// short:
//
//   name <text>              hubs <count>            clients <a> <b> ...
//   table-bytes <n>          seed <n>                agreements <n>
//   n <n>  k <n>  kb <n>     m <bytes>               scheme shamir|xor
//   adapted 0|1              query-identity 0|1      request-cap <n>
//   compromise <hub> observe|drop|corrupt-share|identity-lie
//   collude <hub,hub,...> [fake-k=<n>] [keep-honest=0|1]
//   link <from>-><to> deliver|drop|reorder|corrupt=<p,p,..>|replay=<i>|inject=<hex>
//   post-replay <target-from>-><target-to> <source-from>-><source-to> <index>
//   post-inject <from>-><to> <hex>
//   expect <party> agreed|aborted [Reason]
//   expect match | expect mismatch | expect no-wrong-key
//   expect reject <Reason>
//
// Repeated `link` lines for one link queue actions for its 1st, 2nd, ...
// frame. Malformed input raises ScriptError.

namespace dske::sim {

struct Expectation {
  enum class Kind : std::uint8_t {
    party_agreed,
    party_aborted,
    match,          // every party agreed and all secrets are identical
    mismatch,       // parties "agreed" on different secrets (threshold breach demo)
    reject_seen,    // a rejection with the given reason was logged somewhere
    no_wrong_key,   // never: all agreed with differing secrets
  };
  Kind kind = Kind::match;
  std::string party;
  std::optional<ErrorCode> reason;
};

struct Scenario {
  std::string name = "unnamed";
  ScenarioConfig config;
  std::vector<Expectation> expectations;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

struct Verdict {
  bool pass = true;
  std::vector<std::string> lines;  // one PASS/FAIL line per expectation
};

Verdict check_expectations(const Scenario& scenario, const RunReport& report);

std::optional<ErrorCode> error_code_from_name(const std::string& name);

}  // namespace dske::sim
