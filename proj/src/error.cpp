#include "hrv/error.hpp"

namespace hrv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::invalid_argument: return "InvalidArgument";
  case ErrorKind::too_short: return "TooShort";
  case ErrorKind::insufficient_peaks: return "InsufficientPeaks";
  case ErrorKind::empty_series: return "EmptySeries";
  case ErrorKind::non_positive_threshold: return "NonPositiveThreshold";
  case ErrorKind::span_too_short: return "SpanTooShort";
  case ErrorKind::empty_track: return "EmptyTrack";
  case ErrorKind::degenerate_fit: return "DegenerateFit";
  case ErrorKind::too_few_rows: return "TooFewRows";
  case ErrorKind::class_too_small: return "ClassTooSmall";
  case ErrorKind::too_few_groups: return "TooFewGroups";
  case ErrorKind::empty_sample: return "EmptySample";
  case ErrorKind::non_positive_interval: return "NonPositiveInterval";
  case ErrorKind::rate_too_low: return "RateTooLow";
  case ErrorKind::parse_error: return "ParseError";
  case ErrorKind::io_error: return "IoError";
  }
  return "Unknown";
}

} // namespace hrv
