#include "hmrfcs/error.hpp"

namespace hmrfcs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::file_not_found: return "file-not-found";
    case ErrorCode::unsupported_format: return "unsupported-format";
    case ErrorCode::dimension_overflow: return "dimension-overflow";
    case ErrorCode::io_failure: return "io-failure";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::out_of_range: return "out-of-range";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hmrfcs
