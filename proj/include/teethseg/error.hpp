#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teethseg {

enum class ErrorCode {
  parse_error,
  length_mismatch,
  invalid_argument,
  degenerate_geometry,
  empty_selection,
  not_a_disk,
  numerical_failure,
  invalid_polygon,
  no_anchor,
  unreachable_region,
  degenerate_fit,
  too_many_teeth,
  empty_evaluation,
  overlap_validation,
  invalid_index,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every library operation. The code is stable and is
/// what the CLI reports; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace teethseg
