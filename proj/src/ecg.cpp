#include "hrv/ecg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hrv/error.hpp"

namespace hrv {

EcgRecording::EcgRecording(std::vector<double> samples, double sampling_rate)
    : samples_(std::move(samples)), rate_(sampling_rate) {
  if (!(rate_ > 0.0) || !std::isfinite(rate_))
    throw Error(ErrorKind::invalid_argument, "sampling rate must be positive");
  if (samples_.size() < 2)
    throw Error(ErrorKind::too_short, "recording needs at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      throw Error(ErrorKind::invalid_argument, "sample " + std::to_string(i) + " is not finite");
}

namespace {

constexpr double kRefractoryS = 0.200;
constexpr double kTWaveWindowS = 0.360;
constexpr double kIntegrationS = 0.150;
constexpr double kRefineS = 0.050;
constexpr double kEdgeS = 1.0;
constexpr double kLearningS = 2.0;

// Second-order Butterworth section (bilinear transform, Q = 1/sqrt(2)).
struct Biquad {
  double b0, b1, b2, a1, a2;

  static Biquad lowpass(double cutoff, double rate) {
    const double w0 = 2.0 * std::numbers::pi * cutoff / rate;
    const double alpha = std::sin(w0) / std::numbers::sqrt2;
    const double c = std::cos(w0);
    const double a0 = 1.0 + alpha;
    return {(1.0 - c) / 2.0 / a0, (1.0 - c) / a0, (1.0 - c) / 2.0 / a0, -2.0 * c / a0,
            (1.0 - alpha) / a0};
  }

  static Biquad highpass(double cutoff, double rate) {
    const double w0 = 2.0 * std::numbers::pi * cutoff / rate;
    const double alpha = std::sin(w0) / std::numbers::sqrt2;
    const double c = std::cos(w0);
    const double a0 = 1.0 + alpha;
    return {(1.0 + c) / 2.0 / a0, -(1.0 + c) / a0, (1.0 + c) / 2.0 / a0, -2.0 * c / a0,
            (1.0 - alpha) / a0};
  }

  void apply(std::vector<double> &x) const {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    for (double &v : x) {
      const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
};

// Forward-backward pass so the band-passed signal stays aligned with the raw one.
void zero_phase(std::vector<double> &x, const Biquad &f) {
  f.apply(x);
  std::reverse(x.begin(), x.end());
  f.apply(x);
  std::reverse(x.begin(), x.end());
}

std::vector<double> band_pass(std::span<const double> raw, double rate) {
  const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
  std::vector<double> x(raw.size());
  std::transform(raw.begin(), raw.end(), x.begin(), [mean](double v) { return v - mean; });
  // Cutoffs above Nyquist collapse to a pass-through for that stage.
  if (15.0 < 0.5 * rate)
    zero_phase(x, Biquad::lowpass(15.0, rate));
  if (5.0 < 0.5 * rate)
    zero_phase(x, Biquad::highpass(5.0, rate));
  return x;
}

// Five-point derivative with taps spaced to match the original 200 Hz design.
std::vector<double> derivative(const std::vector<double> &x, double rate) {
  const auto h = static_cast<std::ptrdiff_t>(std::max(1.0, std::round(rate / 200.0)));
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const double scale = rate / (8.0 * static_cast<double>(h));
  std::vector<double> d(x.size(), 0.0);
  auto at = [&](std::ptrdiff_t i) { return x[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))]; };
  for (std::ptrdiff_t i = 0; i < n; ++i)
    d[static_cast<std::size_t>(i)] =
        scale * (-at(i - 2 * h) - 2.0 * at(i - h) + 2.0 * at(i + h) + at(i + 2 * h));
  return d;
}

std::vector<double> moving_window_integral(const std::vector<double> &sq, std::size_t width) {
  const std::size_t n = sq.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    prefix[i + 1] = prefix[i] + sq[i];
  const std::size_t half = width / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(width);
  }
  return out;
}

// Local maxima that dominate their refractory neighbourhood.
std::vector<std::size_t> candidate_peaks(const std::vector<double> &m, std::size_t refractory) {
  std::vector<std::size_t> out;
  const std::size_t n = m.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(m[i] > m[i - 1] && m[i] >= m[i + 1]))
      continue;
    const std::size_t lo = i >= refractory ? i - refractory : 0;
    const std::size_t hi = std::min(n, i + refractory + 1);
    const auto best = std::max_element(m.begin() + static_cast<std::ptrdiff_t>(lo),
                                       m.begin() + static_cast<std::ptrdiff_t>(hi));
    if (static_cast<std::size_t>(best - m.begin()) == i)
      out.push_back(i);
  }
  return out;
}

double max_abs_slope(const std::vector<double> &d, std::size_t centre, std::size_t half) {
  const std::size_t lo = centre >= half ? centre - half : 0;
  const std::size_t hi = std::min(d.size(), centre + half + 1);
  double best = 0.0;
  for (std::size_t i = lo; i < hi; ++i)
    best = std::max(best, std::abs(d[i]));
  return best;
}

class ThresholdTracker {
public:
  ThresholdTracker(double signal_level, double noise_level)
      : spki_(signal_level), npki_(noise_level) {}

  double primary() const { return npki_ + 0.25 * (spki_ - npki_); }
  double secondary() const { return 0.5 * primary(); }
  void signal(double peak) { spki_ = 0.125 * peak + 0.875 * spki_; }
  void searchback_signal(double peak) { spki_ = 0.25 * peak + 0.75 * spki_; }
  void noise(double peak) { npki_ = 0.125 * peak + 0.875 * npki_; }

private:
  double spki_;
  double npki_;
};

} // namespace

PeakTrain detect_r_peaks(const EcgRecording &rec) {
  const double rate = rec.sampling_rate();
  if (rec.duration_s() < 2.0)
    throw Error(ErrorKind::too_short, "recording shorter than 2 s");

  const auto raw = rec.samples();
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  if (*lo_it == *hi_it)
    return PeakTrain{{}, true};

  const auto filtered = band_pass(raw, rate);
  const auto slope = derivative(filtered, rate);
  std::vector<double> squared(slope.size());
  std::transform(slope.begin(), slope.end(), squared.begin(), [](double v) { return v * v; });
  const auto width = static_cast<std::size_t>(std::max(1.0, std::round(kIntegrationS * rate)));
  const auto mwi = moving_window_integral(squared, width);

  const auto samples = [rate](double seconds) {
    return static_cast<std::size_t>(std::round(seconds * rate));
  };
  const std::size_t refractory = samples(kRefractoryS);
  const auto candidates = candidate_peaks(mwi, refractory);

  const std::size_t learn_end = std::min(mwi.size(), samples(kLearningS));
  const double learn_max = *std::max_element(mwi.begin(), mwi.begin() + static_cast<std::ptrdiff_t>(learn_end));
  const double learn_mean = std::accumulate(mwi.begin(), mwi.begin() + static_cast<std::ptrdiff_t>(learn_end), 0.0) /
                            static_cast<double>(learn_end);
  ThresholdTracker thresholds(learn_max / 3.0, learn_mean / 2.0);

  std::vector<std::size_t> qrs;
  std::vector<std::size_t> noise_peaks;
  double last_slope = 0.0;
  const std::size_t slope_half = samples(0.075);

  auto rr_average = [&]() {
    const std::size_t count = std::min<std::size_t>(8, qrs.size() - 1);
    return static_cast<double>(qrs.back() - qrs[qrs.size() - 1 - count]) / static_cast<double>(count);
  };

  for (const std::size_t p : candidates) {
    // Search back for a missed beat when the gap grows past 166% of the recent mean RR.
    if (qrs.size() >= 2 && static_cast<double>(p - qrs.back()) > 1.66 * rr_average()) {
      std::size_t best = 0;
      double best_value = thresholds.secondary();
      for (const std::size_t q : noise_peaks) {
        if (q > qrs.back() + refractory && q + refractory < p && mwi[q] > best_value) {
          best = q;
          best_value = mwi[q];
        }
      }
      if (best != 0) {
        qrs.push_back(best);
        last_slope = max_abs_slope(slope, best, slope_half);
        thresholds.searchback_signal(mwi[best]);
      }
    }

    const double value = mwi[p];
    if (value > thresholds.primary()) {
      const double s = max_abs_slope(slope, p, slope_half);
      const bool t_wave = !qrs.empty() && p - qrs.back() < samples(kTWaveWindowS) && s < 0.5 * last_slope;
      if (t_wave || (!qrs.empty() && p - qrs.back() < refractory)) {
        thresholds.noise(value);
        noise_peaks.push_back(p);
      } else {
        qrs.push_back(p);
        last_slope = s;
        thresholds.signal(value);
      }
    } else {
      thresholds.noise(value);
      noise_peaks.push_back(p);
    }
  }

  const std::size_t half = samples(kRefineS);
  std::vector<std::size_t> refined;
  refined.reserve(qrs.size());
  for (const std::size_t f : qrs) {
    const std::size_t lo = f >= half ? f - half : 0;
    const std::size_t hi = std::min(raw.size(), f + half + 1);
    const auto it = std::max_element(raw.begin() + static_cast<std::ptrdiff_t>(lo),
                                     raw.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto r = static_cast<std::size_t>(it - raw.begin());
    if (!refined.empty() && r < refined.back() + refractory) {
      if (raw[r] > raw[refined.back()])
        refined.back() = r;
      continue;
    }
    refined.push_back(r);
  }

  const std::size_t edge = samples(kEdgeS);
  PeakTrain out;
  for (const std::size_t r : refined)
    if (r >= edge && r + edge < raw.size())
      out.indices.push_back(r);
  return out;
}

} // namespace hrv
