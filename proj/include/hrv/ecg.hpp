#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hrv {

/// Uniformly sampled single-lead ECG (millivolts).
class EcgRecording {
public:
  EcgRecording(std::vector<double> samples, double sampling_rate);

  std::span<const double> samples() const noexcept { return samples_; }
  double sampling_rate() const noexcept { return rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept { return static_cast<double>(samples_.size()) / rate_; }

private:
  std::vector<double> samples_;
  double rate_;
};

struct PeakTrain {
  std::vector<std::size_t> indices;
  /// Set when the input had zero variance; `indices` is then empty.
  bool flat_signal = false;
};

/// Pan-Tompkins QRS detection. Band-pass 5-15 Hz, five-point derivative,
/// squaring, 150 ms moving-window integration, then dual adaptive thresholds
/// with search-back and T-wave rejection. Each fiducial is refined to the
/// raw-signal maximum within +-50 ms. Peaks in the first and last second are
/// not reported.
PeakTrain detect_r_peaks(const EcgRecording &rec);

} // namespace hrv
