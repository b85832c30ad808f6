#include "hrv/timedomain.hpp"

#include <cmath>
#include <string>

#include "hrv/error.hpp"

namespace hrv {

namespace {

void require_pairs(const RrSeries &rr) {
  if (rr.size() < 2)
    throw Error(ErrorKind::too_short, "need at least 2 intervals, got " + std::to_string(rr.size()));
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v)
    sum += x;
  return sum / static_cast<double>(v.size());
}

std::vector<double> successive_differences(std::span<const double> v) {
  std::vector<double> d(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    d[i] = v[i + 1] - v[i];
  return d;
}

} // namespace

double mean_rr(const RrSeries &rr) {
  if (rr.empty())
    throw Error(ErrorKind::empty_series, "mean of an empty series");
  return mean_of(rr.intervals());
}

double sdrr(const RrSeries &rr) {
  const double mean = mean_rr(rr);
  double ss = 0.0;
  for (double x : rr.intervals())
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(rr.size()));
}

double rmssd(const RrSeries &rr) {
  require_pairs(rr);
  const auto d = successive_differences(rr.intervals());
  double ss = 0.0;
  for (double x : d)
    ss += x * x;
  return std::sqrt(ss / static_cast<double>(d.size()));
}

double sdsd(const RrSeries &rr) {
  require_pairs(rr);
  const auto d = successive_differences(rr.intervals());
  const double mean = mean_of(d);
  double ss = 0.0;
  for (double x : d)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(d.size()));
}

double pnnx(const RrSeries &rr, double x_ms) {
  require_pairs(rr);
  if (!(x_ms > 0.0))
    throw Error(ErrorKind::non_positive_threshold, "pNNx threshold must be positive");
  const auto v = rr.intervals();
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (std::abs(v[i] - v[i + 1]) > x_ms)
      ++count;
  return 100.0 * static_cast<double>(count) / static_cast<double>(v.size() - 1);
}

TimeDomainIndices compute_time_domain(const RrSeries &rr, std::span<const double> thresholds) {
  TimeDomainIndices out;
  out.mean_rr = mean_rr(rr);
  out.sdrr = sdrr(rr);
  out.rmssd = rmssd(rr);
  out.sdsd = sdsd(rr);
  for (double x : thresholds)
    out.pnn[x] = pnnx(rr, x);
  return out;
}

} // namespace hrv
