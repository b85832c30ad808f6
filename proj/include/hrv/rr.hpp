#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrv/ecg.hpp"

namespace hrv {

/// Beat-to-beat intervals in milliseconds, each stamped with the time (s) of
/// the beat that terminates it.
class RrSeries {
public:
  RrSeries() = default;
  RrSeries(std::vector<double> intervals_ms, std::vector<double> onsets_s);

  std::span<const double> intervals() const noexcept { return intervals_; }
  std::span<const double> onsets() const noexcept { return onsets_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }

  /// Time of the beat that opens the first interval.
  double start_time() const;
  /// last onset - start_time()
  double span_s() const;

  RrSeries slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const RrSeries &, const RrSeries &) = default;

private:
  std::vector<double> intervals_;
  std::vector<double> onsets_;
};

RrSeries peaks_to_rr(const PeakTrain &peaks, double sampling_rate);

struct ArtifactFilterConfig {
  double min_ms = 300.0;
  double max_ms = 2000.0;
  double max_relative_deviation = 0.20;
  std::size_t median_window = 11;
};

/// Drops intervals outside the physiological bounds or too far from the
/// centred running median, repeating until nothing more is removed.
RrSeries filter_artifacts(const RrSeries &rr, const ArtifactFilterConfig &config = {});

} // namespace hrv
