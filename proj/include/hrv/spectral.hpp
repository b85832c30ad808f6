#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hrv/rr.hpp"

namespace hrv {

inline constexpr double kMaxFrequencyHz = 0.4;

struct BandEdges {
  static constexpr double ulf_hi = 0.0033;
  static constexpr double vlf_hi = 0.04;
  static constexpr double lf_hi = 0.15;
  static constexpr double hf_hi = kMaxFrequencyHz;
};

/// Normalised Lomb-Scargle power on an ascending grid within (0, 0.4] Hz.
struct Periodogram {
  std::vector<double> freqs;
  std::vector<double> power;
  /// Population variance of the intervals (ms^2).
  double variance = 0.0;
  /// Multiplier taking `power` to a one-sided density in ms^2/Hz: 2 * variance * mean
  /// sampling interval. Integrating the density over all frequencies up to the mean
  /// Nyquist rate recovers the variance.
  double density_scale = 0.0;
  bool zero_variance = false;
};

struct BandPowers {
  double ulf = 0, vlf = 0, lf = 0, hf = 0, tp = 0;
  std::optional<double> lf_hf; ///< empty when hf == 0
};

/// f from 1/T to 0.4 Hz in steps of 1/(4T); 0.4 is always the last point.
std::vector<double> default_frequency_grid(double span_s);

Periodogram lomb_scargle(const RrSeries &rr, std::span<const double> grid_hz);
Periodogram lomb_scargle(const RrSeries &rr);

/// Trapezoidal band integrals of the density. The density is held at its
/// first grid value down to 0 Hz and at its last value up to 0.4 Hz.
BandPowers band_powers(const Periodogram &p);

} // namespace hrv
