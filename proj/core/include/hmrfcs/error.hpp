#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmrfcs {

enum class ErrorCode {
  file_not_found,
  unsupported_format,
  dimension_overflow,
  io_failure,
  dimension_mismatch,
  invalid_argument,
  out_of_range,
};

std::string_view to_string(ErrorCode code);

/// Exception type thrown by every fallible operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmrfcs
