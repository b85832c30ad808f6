#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hrv {

enum class ErrorKind {
  invalid_argument,
  too_short,
  insufficient_peaks,
  empty_series,
  non_positive_threshold,
  span_too_short,
  empty_track,
  degenerate_fit,
  too_few_rows,
  class_too_small,
  too_few_groups,
  empty_sample,
  non_positive_interval,
  rate_too_low,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to a diagnostic and an exit code.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace hrv
