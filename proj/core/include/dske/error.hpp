#pragma once

#include <stdexcept>
#include <string>

namespace dske {

// Every failure the library reports, shared across modules so that protocol
// handlers, the simulator and the CLI can classify outcomes uniformly.
enum class ErrorCode {
  zero_inverse,
  duplicate_coordinate,
  length_mismatch,
  bad_params,
  insufficient_shares,
  table_exhausted,
  overlap_detected,
  out_of_bounds,
  bad_magic,
  truncated_file,
  id_mismatch,
  truncated,
  unknown_message_type,
  field_overflow,
  unknown_client,
  unknown_subject,
  tag_invalid,
  hub_not_accepted,
  sender_not_accepted,
  params_out_of_range,
  no_consensus,
  injection_detected,
  insufficient_valid_shares,
  validation_failed,
  request_cap_exceeded,
  malformed_message,
  script_error,
};

const char* to_string(ErrorCode code);

class DskeError : public std::runtime_error {
 public:
  DskeError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  explicit DskeError(ErrorCode code)
      : std::runtime_error(to_string(code)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dske
