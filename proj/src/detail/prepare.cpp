#include "detail/prepare.hpp"

#include <cmath>

#include "hrv/error.hpp"

namespace hrv::detail {

LombScarglePrep prepare_lomb_scargle(const RrSeries &rr, std::span<const double> grid_hz) {
  if (rr.size() < 4)
    throw Error(ErrorKind::too_short, "Lomb-Scargle needs at least 4 intervals");
  if (grid_hz.empty())
    throw Error(ErrorKind::invalid_argument, "empty frequency grid");
  for (std::size_t k = 0; k < grid_hz.size(); ++k) {
    if (!(grid_hz[k] > 0.0) || grid_hz[k] > kMaxFrequencyHz + 1e-12)
      throw Error(ErrorKind::invalid_argument, "grid frequency outside (0, 0.4] Hz");
    if (k > 0 && grid_hz[k] <= grid_hz[k - 1])
      throw Error(ErrorKind::invalid_argument, "grid is not strictly increasing");
  }

  LombScarglePrep prep;
  const auto rri = rr.intervals();
  const auto onsets = rr.onsets();
  const auto n = static_cast<double>(rr.size());
  double mean = 0.0;
  for (double v : rri)
    mean += v;
  mean /= n;
  double variance = 0.0;
  for (double v : rri)
    variance += (v - mean) * (v - mean);
  variance /= n;

  prep.x.reserve(rr.size());
  prep.t.reserve(rr.size());
  for (std::size_t i = 0; i < rr.size(); ++i) {
    prep.x.push_back(rri[i] - mean);
    prep.t.push_back(onsets[i] - onsets[0]);
  }

  auto &p = prep.periodogram;
  p.freqs.assign(grid_hz.begin(), grid_hz.end());
  p.power.assign(grid_hz.size(), 0.0);
  p.variance = variance;
  const double mean_dt = (onsets.back() - onsets.front()) / (n - 1.0);
  p.density_scale = 2.0 * variance * mean_dt;
  p.zero_variance = variance == 0.0;
  return prep;
}

} // namespace hrv::detail
