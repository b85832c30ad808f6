#pragma once

#include <span>
#include <vector>

#include "hrv/spectral.hpp"

namespace hrv::detail {

struct LombScarglePrep {
  Periodogram periodogram; // freqs filled, power zeroed
  std::vector<double> t;
  std::vector<double> x;
};

/// Validates input and grid, centres the series and fills everything except power.
LombScarglePrep prepare_lomb_scargle(const RrSeries &rr, std::span<const double> grid_hz);

} // namespace hrv::detail
