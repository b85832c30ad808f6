#include "hrv/windowing.hpp"

#include <algorithm>
#include <string>

#include "hrv/error.hpp"
#include "hrv/nonlinear.hpp"
#include "hrv/spectral.hpp"
#include "hrv/timedomain.hpp"

namespace hrv {

void WindowSpec::validate() const {
  if (!(length_s > 0.0) || !std::isfinite(length_s))
    throw Error(ErrorKind::invalid_argument, "window length must be positive");
  if (!(step_s > 0.0) || step_s > length_s)
    throw Error(ErrorKind::invalid_argument, "window step must lie in (0, length]");
}

std::optional<Feature> feature_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kFeatureCount; ++k)
    if (kFeatureNames[k] == name)
      return static_cast<Feature>(k);
  return std::nullopt;
}

std::size_t window_count(double span_s, const WindowSpec &spec) {
  spec.validate();
  if (span_s < spec.length_s)
    return 0;
  // The epsilon keeps exact multiples of the step from rounding down.
  return static_cast<std::size_t>(std::floor((span_s - spec.length_s) / spec.step_s + 1e-9)) + 1;
}

std::vector<RrSeries> sliding_windows(const RrSeries &rr, const WindowSpec &spec) {
  spec.validate();
  if (rr.empty())
    throw Error(ErrorKind::span_too_short, "series is empty");
  const double span = rr.span_s();
  const std::size_t count = window_count(span, spec);
  if (count == 0)
    throw Error(ErrorKind::span_too_short, "series spans " + std::to_string(span) +
                                               " s, window needs " + std::to_string(spec.length_s) + " s");
  const double t0 = rr.start_time();
  const auto onsets = rr.onsets();
  std::vector<RrSeries> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double lo = t0 + static_cast<double>(k) * spec.step_s;
    const double hi = lo + spec.length_s;
    const auto first = std::lower_bound(onsets.begin(), onsets.end(), lo) - onsets.begin();
    const auto last = std::lower_bound(onsets.begin(), onsets.end(), hi) - onsets.begin();
    out.push_back(rr.slice(static_cast<std::size_t>(first), static_cast<std::size_t>(last)));
  }
  return out;
}

IndexVector compute_indices(const RrSeries &window, double start_s, const WindowSpec &spec) {
  IndexVector iv;
  iv.window_start_s = start_s;
  iv.window_end_s = start_s + spec.length_s;
  if (window.size() < kMinWindowIntervals) {
    iv.low_density = true;
    return iv;
  }

  const auto td = compute_time_domain(window, kDefaultPnnThresholds);
  iv[Feature::mean_rr] = td.mean_rr;
  iv[Feature::sdrr] = td.sdrr;
  iv[Feature::rmssd] = td.rmssd;
  iv[Feature::sdsd] = td.sdsd;
  iv[Feature::pnn10] = td.pnn.at(10);
  iv[Feature::pnn20] = td.pnn.at(20);
  iv[Feature::pnn25] = td.pnn.at(25);
  iv[Feature::pnn30] = td.pnn.at(30);
  iv[Feature::pnn40] = td.pnn.at(40);
  iv[Feature::pnn50] = td.pnn.at(50);

  const auto grid = default_frequency_grid(spec.length_s);
  const auto bands = band_powers(lomb_scargle(window, grid));
  iv[Feature::vlf] = bands.vlf;
  iv[Feature::lf] = bands.lf;
  iv[Feature::hf] = bands.hf;
  iv[Feature::tp] = bands.tp;
  iv[Feature::lf_hf] = bands.lf_hf.value_or(kUndefined);

  const auto pc = poincare(window);
  iv[Feature::sd1] = pc.sd1;
  iv[Feature::sd2] = pc.sd2;
  iv[Feature::sd1_sd2] = pc.ratio.value_or(kUndefined);

  iv[Feature::sampen] = sample_entropy(window).value.value_or(kUndefined);

  if (window.size() >= kMinDfaLength) {
    const auto exps = dfa(window);
    iv[Feature::dfa_alpha1] = exps.alpha1.value_or(kUndefined);
    iv[Feature::dfa_alpha2] = exps.alpha2.value_or(kUndefined);
  }
  return iv;
}

std::vector<IndexVector> compute_track(const RrSeries &rr, const WindowSpec &spec) {
  const auto windows = sliding_windows(rr, spec);
  const double t0 = rr.start_time();
  std::vector<IndexVector> track(windows.size());
  const auto count = static_cast<std::ptrdiff_t>(windows.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    track[i] = compute_indices(windows[i], t0 + static_cast<double>(k) * spec.step_s, spec);
  }
  return track;
}

std::vector<IndexVector> normalize_unit_interval(const std::vector<IndexVector> &track) {
  if (track.empty())
    throw Error(ErrorKind::empty_track, "cannot normalise an empty track");
  auto out = track;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto &iv : track) {
      const double v = iv.values[f];
      if (is_undefined(v))
        continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo > hi)
      continue;
    for (auto &iv : out) {
      double &v = iv.values[f];
      if (is_undefined(v))
        continue;
      v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    }
  }
  return out;
}

} // namespace hrv
