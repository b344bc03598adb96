#include "dske/error.hpp"

namespace dske {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::zero_inverse: return "ZeroInverse";
    case ErrorCode::duplicate_coordinate: return "DuplicateCoordinate";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::bad_params: return "BadParams";
    case ErrorCode::insufficient_shares: return "InsufficientShares";
    case ErrorCode::table_exhausted: return "TableExhausted";
    case ErrorCode::overlap_detected: return "OverlapDetected";
    case ErrorCode::out_of_bounds: return "OutOfBounds";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::truncated_file: return "TruncatedFile";
    case ErrorCode::id_mismatch: return "IdMismatch";
    case ErrorCode::truncated: return "Truncated";
    case ErrorCode::unknown_message_type: return "UnknownMessageType";
    case ErrorCode::field_overflow: return "FieldOverflow";
    case ErrorCode::unknown_client: return "UnknownClient";
    case ErrorCode::unknown_subject: return "UnknownSubject";
    case ErrorCode::tag_invalid: return "TagInvalid";
    case ErrorCode::hub_not_accepted: return "HubNotAccepted";
    case ErrorCode::sender_not_accepted: return "SenderNotAccepted";
    case ErrorCode::params_out_of_range: return "ParamsOutOfRange";
    case ErrorCode::no_consensus: return "NoConsensus";
    case ErrorCode::injection_detected: return "InjectionDetected";
    case ErrorCode::insufficient_valid_shares: return "InsufficientValidShares";
    case ErrorCode::validation_failed: return "ValidationFailed";
    case ErrorCode::request_cap_exceeded: return "RequestCapExceeded";
    case ErrorCode::malformed_message: return "MalformedMessage";
    case ErrorCode::script_error: return "ScriptError";
  }
  return "UnknownError";
}

}  // namespace dske
