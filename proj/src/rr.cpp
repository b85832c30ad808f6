#include "hrv/rr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrv/error.hpp"

namespace hrv {

RrSeries::RrSeries(std::vector<double> intervals_ms, std::vector<double> onsets_s)
    : intervals_(std::move(intervals_ms)), onsets_(std::move(onsets_s)) {
  if (intervals_.size() != onsets_.size())
    throw Error(ErrorKind::invalid_argument, "intervals and onsets differ in length");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!std::isfinite(intervals_[i]) || intervals_[i] <= 0.0)
      throw Error(ErrorKind::invalid_argument,
                  "interval " + std::to_string(i) + " is not a positive finite value");
    if (!std::isfinite(onsets_[i]))
      throw Error(ErrorKind::invalid_argument, "onset " + std::to_string(i) + " is not finite");
    if (i > 0 && onsets_[i] <= onsets_[i - 1])
      throw Error(ErrorKind::invalid_argument, "onsets are not strictly increasing at index " +
                                                   std::to_string(i));
  }
}

double RrSeries::start_time() const {
  if (empty())
    throw Error(ErrorKind::empty_series, "series has no intervals");
  return onsets_.front() - intervals_.front() / 1000.0;
}

double RrSeries::span_s() const { return onsets_.back() - start_time(); }

RrSeries RrSeries::slice(std::size_t first, std::size_t last) const {
  RrSeries out;
  out.intervals_.assign(intervals_.begin() + first, intervals_.begin() + last);
  out.onsets_.assign(onsets_.begin() + first, onsets_.begin() + last);
  return out;
}

RrSeries peaks_to_rr(const PeakTrain &peaks, double sampling_rate) {
  if (!(sampling_rate > 0.0))
    throw Error(ErrorKind::invalid_argument, "sampling rate must be positive");
  const auto &idx = peaks.indices;
  if (idx.size() < 2)
    throw Error(ErrorKind::insufficient_peaks,
                "need at least 2 peaks, got " + std::to_string(idx.size()));
  std::vector<double> intervals;
  std::vector<double> onsets;
  intervals.reserve(idx.size() - 1);
  onsets.reserve(idx.size() - 1);
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    const auto gap = static_cast<double>(idx[i + 1] - idx[i]);
    intervals.push_back(gap / sampling_rate * 1000.0);
    onsets.push_back(static_cast<double>(idx[i + 1]) / sampling_rate);
  }
  return {std::move(intervals), std::move(onsets)};
}

namespace {

std::vector<bool> filter_pass(std::span<const double> rr, const ArtifactFilterConfig &config) {
  std::vector<bool> keep(rr.size(), false);
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < rr.size(); ++i)
    if (rr[i] >= config.min_ms && rr[i] <= config.max_ms)
      inside.push_back(i);

  const std::size_t half = config.median_window / 2;
  std::vector<double> window;
  for (std::size_t k = 0; k < inside.size(); ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(inside.size(), k + half + 1);
    window.clear();
    for (std::size_t j = lo; j < hi; ++j)
      window.push_back(rr[inside[j]]);
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    std::nth_element(window.begin(), mid, window.end());
    double median = *mid;
    if (window.size() % 2 == 0) {
      const double lower = *std::max_element(window.begin(), mid);
      median = 0.5 * (median + lower);
    }
    const double value = rr[inside[k]];
    keep[inside[k]] = std::abs(value - median) <= config.max_relative_deviation * median;
  }
  return keep;
}

} // namespace

RrSeries filter_artifacts(const RrSeries &rr, const ArtifactFilterConfig &config) {
  std::vector<double> intervals(rr.intervals().begin(), rr.intervals().end());
  std::vector<double> onsets(rr.onsets().begin(), rr.onsets().end());
  for (;;) {
    const auto keep = filter_pass(intervals, config);
    if (std::all_of(keep.begin(), keep.end(), [](bool k) { return k; }))
      break;
    std::vector<double> kept_rr;
    std::vector<double> kept_t;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) {
        kept_rr.push_back(intervals[i]);
        kept_t.push_back(onsets[i]);
      }
    }
    intervals = std::move(kept_rr);
    onsets = std::move(kept_t);
  }
  return {std::move(intervals), std::move(onsets)};
}

} // namespace hrv
