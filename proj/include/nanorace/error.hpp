#pragma once

#include <stdexcept>
#include <string>

namespace nanorace {

enum class ErrorCode {
  invalid_geometry,
  placement_failed,
  no_movable,
  dimension_mismatch,
  bad_header,
  bad_checksum,
  short_frame,
  bad_magic,
  truncated,
  insufficient_data,
  empty_input,
  invalid_multiplier,
  bad_config,
  io_error,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_geometry: return "INVALID_GEOMETRY";
    case ErrorCode::placement_failed: return "PLACEMENT_FAILED";
    case ErrorCode::no_movable: return "NO_MOVABLE";
    case ErrorCode::dimension_mismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::bad_header: return "BAD_HEADER";
    case ErrorCode::bad_checksum: return "BAD_CHECKSUM";
    case ErrorCode::short_frame: return "SHORT_FRAME";
    case ErrorCode::bad_magic: return "BAD_MAGIC";
    case ErrorCode::truncated: return "TRUNCATED";
    case ErrorCode::insufficient_data: return "INSUFFICIENT_DATA";
    case ErrorCode::empty_input: return "EMPTY_INPUT";
    case ErrorCode::invalid_multiplier: return "INVALID_MULTIPLIER";
    case ErrorCode::bad_config: return "BAD_CONFIG";
    case ErrorCode::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace nanorace
