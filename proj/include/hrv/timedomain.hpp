#pragma once

#include <map>
#include <span>
#include <vector>

#include "hrv/rr.hpp"

namespace hrv {

inline const std::vector<double> kDefaultPnnThresholds{10, 20, 25, 30, 40, 50};

struct TimeDomainIndices {
  double mean_rr = 0;
  double sdrr = 0;
  double rmssd = 0;
  double sdsd = 0;
  std::map<double, double> pnn; ///< threshold (ms) -> percentage
};

double mean_rr(const RrSeries &rr);
/// Population standard deviation of the intervals.
double sdrr(const RrSeries &rr);
double rmssd(const RrSeries &rr);
/// Population standard deviation of successive differences.
double sdsd(const RrSeries &rr);
/// Percentage of adjacent pairs whose absolute difference is strictly above `x_ms`.
double pnnx(const RrSeries &rr, double x_ms);

TimeDomainIndices compute_time_domain(const RrSeries &rr,
                                      std::span<const double> thresholds = kDefaultPnnThresholds);

} // namespace hrv
