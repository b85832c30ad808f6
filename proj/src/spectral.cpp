#include "hrv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/lsp_kernel.hpp"
#include "detail/prepare.hpp"
#include "hrv/error.hpp"

namespace hrv {

std::vector<double> default_frequency_grid(double span_s) {
  if (!(span_s > 0.0))
    throw Error(ErrorKind::invalid_argument, "grid span must be positive");
  const double f0 = 1.0 / span_s;
  const double step = 1.0 / (4.0 * span_s);
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double f = f0 + static_cast<double>(k) * step;
    if (f >= kMaxFrequencyHz - 1e-12)
      break;
    grid.push_back(f);
  }
  grid.push_back(kMaxFrequencyHz);
  return grid;
}

Periodogram lomb_scargle(const RrSeries &rr, std::span<const double> grid_hz) {
  auto prep = detail::prepare_lomb_scargle(rr, grid_hz);
  if (prep.periodogram.zero_variance)
    return std::move(prep.periodogram);
  auto &p = prep.periodogram;
  const auto n = static_cast<std::ptrdiff_t>(p.freqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    p.power[static_cast<std::size_t>(k)] =
        detail::lsp_at(p.freqs[static_cast<std::size_t>(k)], prep.t, prep.x, p.variance);
  return std::move(p);
}

Periodogram lomb_scargle(const RrSeries &rr) {
  if (rr.size() < 4)
    throw Error(ErrorKind::too_short, "Lomb-Scargle needs at least 4 intervals");
  const auto grid = default_frequency_grid(rr.span_s());
  return lomb_scargle(rr, grid);
}

namespace {

// Piecewise-linear density with constant extension to [0, 0.4].
class Density {
public:
  explicit Density(const Periodogram &p) {
    f_.push_back(0.0);
    d_.push_back(p.density_scale * p.power.front());
    for (std::size_t k = 0; k < p.freqs.size(); ++k) {
      f_.push_back(p.freqs[k]);
      d_.push_back(p.density_scale * p.power[k]);
    }
    if (f_.back() < kMaxFrequencyHz) {
      f_.push_back(kMaxFrequencyHz);
      d_.push_back(d_.back());
    }
  }

  double integral(double lo, double hi) const {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < f_.size(); ++k) {
      const double a = std::max(lo, f_[k]);
      const double b = std::min(hi, f_[k + 1]);
      if (b <= a)
        continue;
      total += 0.5 * (value(k, a) + value(k, b)) * (b - a);
    }
    return total;
  }

private:
  double value(std::size_t k, double f) const {
    const double span = f_[k + 1] - f_[k];
    const double u = (f - f_[k]) / span;
    return d_[k] + u * (d_[k + 1] - d_[k]);
  }

  std::vector<double> f_;
  std::vector<double> d_;
};

} // namespace

BandPowers band_powers(const Periodogram &p) {
  if (p.freqs.empty() || p.freqs.size() != p.power.size())
    throw Error(ErrorKind::invalid_argument, "periodogram is empty or ragged");
  const Density density(p);
  BandPowers out;
  out.ulf = density.integral(0.0, BandEdges::ulf_hi);
  out.vlf = density.integral(BandEdges::ulf_hi, BandEdges::vlf_hi);
  out.lf = density.integral(BandEdges::vlf_hi, BandEdges::lf_hi);
  out.hf = density.integral(BandEdges::lf_hi, BandEdges::hf_hi);
  out.tp = density.integral(0.0, kMaxFrequencyHz);
  if (out.hf > 0.0)
    out.lf_hf = out.lf / out.hf;
  return out;
}

} // namespace hrv
