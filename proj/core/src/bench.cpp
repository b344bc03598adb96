#include "dske/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "dske/rng.hpp"

namespace dske::bench {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double Result::complete_ms_per_mbit() const {
  double mbit = static_cast<double>(config.key_bytes) * 8.0 / 1e6;
  return complete_seconds * 1e3 / mbit;
}

double Result::validate_ms_per_mbit() const {
  double mbit = static_cast<double>(config.key_bytes) * 8.0 / 1e6;
  return validate_seconds * 1e3 / mbit;
}

Result run_share_bench(const Config& config) {
  SchemeParams params{config.n, config.k, SchemeKind::shamir};
  validate_params(params);
  if (config.s < config.k || config.s > config.n) {
    throw DskeError(ErrorCode::bad_params, "need k <= s <= n");
  }
  if (config.corrupt_transit + config.corrupt_matching >= config.s ||
      config.s - config.corrupt_transit < config.k) {
    throw DskeError(ErrorCode::bad_params, "too many corrupted shares for this s");
  }

  Rng rng(config.seed);
  const std::size_t share_len = config.key_bytes + kTagKeyBytes;

  std::vector<Share> fixed;
  fixed.reserve(config.k);
  for (std::uint16_t i = 0; i < config.k; ++i) {
    fixed.push_back(Share{static_cast<std::uint8_t>(i + 1), rng.bytes(share_len)});
  }

  Result result;
  result.config = config;

  // Initiator: completion of the remaining shares plus the secret.
  std::vector<Share> all;
  SecretBundle secret;
  result.complete_seconds = 1e300;
  for (int rep = 0; rep < std::max(1, config.repetitions); ++rep) {
    auto start = std::chrono::steady_clock::now();
    auto [shares, bundle] = complete_shares(params, fixed);
    result.complete_seconds = std::min(result.complete_seconds, seconds_since(start));
    all = std::move(shares);
    secret = std::move(bundle);
  }

  Tag key_tag = compute_tag(TagKey::from_bytes(secret.tag_key(kTagKeyBytes)),
                            secret.key_bits(kTagKeyBytes));

  // Receiver's view: s shares arrive, transit-corrupted ones are discarded at
  // the door, matching-tag corruptions survive with wrong bytes.
  std::vector<Share> delivered(all.begin(), all.begin() + config.s);
  delivered.resize(config.s - config.corrupt_transit);
  for (std::size_t i = 0; i < config.corrupt_matching; ++i) {
    Share& victim = delivered[delivered.size() - 1 - i];
    victim.data = rng.bytes(share_len);
  }

  CandidateInput input;
  input.params = params;
  input.shares = delivered;
  input.key_tag = key_tag;

  CandidateOutcome outcome;
  result.validate_seconds = 1e300;
  for (int rep = 0; rep < std::max(1, config.repetitions); ++rep) {
    auto start = std::chrono::steady_clock::now();
    outcome = validate_candidates(input);
    result.validate_seconds = std::min(result.validate_seconds, seconds_since(start));
  }

  result.subsets_tried = outcome.subsets_tried;
  result.agreed = outcome.valid.size() == 1 && outcome.valid.front().first.secret == secret.secret;
  return result;
}

std::string csv_header() {
  return "n,k,s,transit_corrupt,matching_corrupt,key_bytes,complete_seconds,"
         "validate_seconds,subsets_tried,agreed,complete_ms_per_mbit,validate_ms_per_mbit";
}

std::string csv_row(const Result& r) {
  std::ostringstream out;
  out << r.config.n << ',' << r.config.k << ',' << r.config.s << ',' << r.config.corrupt_transit
      << ',' << r.config.corrupt_matching << ',' << r.config.key_bytes << ','
      << r.complete_seconds << ',' << r.validate_seconds << ',' << r.subsets_tried << ','
      << (r.agreed ? 1 : 0) << ',' << r.complete_ms_per_mbit() << ',' << r.validate_ms_per_mbit();
  return out.str();
}

}  // namespace dske::bench
