#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace hrv::detail {

// Matches of template i against every later template j.
inline void count_matches_from(std::span<const double> x, std::size_t m, double r, std::size_t i,
                               std::uint64_t &b, std::uint64_t &a) {
  const std::size_t templates = x.size() - m;
  for (std::size_t j = i + 1; j < templates; ++j) {
    bool match = true;
    for (std::size_t k = 0; k < m; ++k) {
      if (std::abs(x[i + k] - x[j + k]) > r) {
        match = false;
        break;
      }
    }
    if (!match)
      continue;
    ++b;
    if (std::abs(x[i + m] - x[j + m]) <= r)
      ++a;
  }
}

// Cumulative sum of the mean-centred series.
inline std::vector<double> integrated_profile(std::span<const double> rr) {
  double mean = 0.0;
  for (double v : rr)
    mean += v;
  mean /= static_cast<double>(rr.size());
  std::vector<double> y(rr.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < rr.size(); ++k) {
    acc += rr[k] - mean;
    y[k] = acc;
  }
  return y;
}

inline double fluctuation_at(const std::vector<double> &y, std::size_t n) {
  const std::size_t boxes = y.size() / n;
  if (boxes == 0 || n < 2)
    return 0.0;
  const double nd = static_cast<double>(n);
  const double x_mean = 0.5 * (nd - 1.0);
  const double sxx = nd * (nd * nd - 1.0) / 12.0;
  double total = 0.0;
  for (std::size_t box = 0; box < boxes; ++box) {
    const double *seg = y.data() + box * n;
    double y_mean = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      y_mean += seg[k];
    y_mean /= nd;
    double sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      sxy += (static_cast<double>(k) - x_mean) * (seg[k] - y_mean);
    const double slope = sxy / sxx;
    for (std::size_t k = 0; k < n; ++k) {
      const double fit = y_mean + slope * (static_cast<double>(k) - x_mean);
      const double e = seg[k] - fit;
      total += e * e;
    }
  }
  return std::sqrt(total / static_cast<double>(boxes * n));
}

} // namespace hrv::detail
