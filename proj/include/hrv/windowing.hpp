#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "hrv/rr.hpp"

namespace hrv {

struct WindowSpec {
  double length_s = 300.0;
  double step_s = 15.0;

  void validate() const;
};

enum class Feature : std::size_t {
  mean_rr,
  sdrr,
  rmssd,
  sdsd,
  pnn10,
  pnn20,
  pnn25,
  pnn30,
  pnn40,
  pnn50,
  vlf,
  lf,
  hf,
  tp,
  lf_hf,
  sd1,
  sd2,
  sd1_sd2,
  sampen,
  dfa_alpha1,
  dfa_alpha2,
};

inline constexpr std::size_t kFeatureCount = 21;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "mean_rr", "sdrr", "rmssd", "sdsd", "pnn10", "pnn20",  "pnn25",  "pnn30",      "pnn40",     "pnn50",     "vlf",
    "lf",      "hf",   "tp",    "lf_hf", "sd1",  "sd2",    "sd1_sd2", "sampen",     "dfa_alpha1", "dfa_alpha2"};

std::optional<Feature> feature_from_name(std::string_view name);

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_undefined(double v) { return std::isnan(v); }

/// Minimum number of intervals for a window to be analysed.
inline constexpr std::size_t kMinWindowIntervals = 30;

struct IndexVector {
  double window_start_s = 0;
  double window_end_s = 0;
  std::array<double, kFeatureCount> values;
  bool low_density = false;

  IndexVector() { values.fill(kUndefined); }

  double &operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
};

/// floor((span - length) / step) + 1; zero when the span is shorter than a window.
std::size_t window_count(double span_s, const WindowSpec &spec);

/// Window k holds the intervals whose onset lies in
/// [t0 + k*step, t0 + k*step + length), t0 being the series start time.
std::vector<RrSeries> sliding_windows(const RrSeries &rr, const WindowSpec &spec);

/// Every index for one window. Indices a window cannot support (too few
/// beats, no sample-entropy matches, too few DFA scales) stay undefined.
IndexVector compute_indices(const RrSeries &window, double start_s, const WindowSpec &spec);

std::vector<IndexVector> compute_track(const RrSeries &rr, const WindowSpec &spec);

/// Per-feature min-max rescale over the track. Constant columns map to 0;
/// undefined entries are left alone.
std::vector<IndexVector> normalize_unit_interval(const std::vector<IndexVector> &track);

} // namespace hrv
