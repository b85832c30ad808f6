#include "hrv/serial.hpp"

#include "detail/lsp_kernel.hpp"
#include "detail/nonlinear_kernels.hpp"
#include "detail/prepare.hpp"
#include "hrv/error.hpp"

namespace hrv::serial {

Periodogram lomb_scargle(const RrSeries &rr, std::span<const double> grid_hz) {
  auto prep = detail::prepare_lomb_scargle(rr, grid_hz);
  auto &p = prep.periodogram;
  if (p.zero_variance)
    return std::move(p);
  for (std::size_t k = 0; k < p.freqs.size(); ++k)
    p.power[k] = detail::lsp_at(p.freqs[k], prep.t, prep.x, p.variance);
  return std::move(p);
}

TemplateMatches sample_entropy_matches(std::span<const double> x, std::size_t m, double r) {
  if (x.size() < m + 2)
    throw Error(ErrorKind::too_short, "sample entropy needs at least m + 2 points");
  TemplateMatches out;
  for (std::size_t i = 0; i < x.size() - m; ++i)
    detail::count_matches_from(x, m, r, i, out.length_m, out.length_m1);
  return out;
}

std::vector<double> dfa_fluctuations(const RrSeries &rr, std::span<const std::size_t> scales) {
  if (rr.empty())
    throw Error(ErrorKind::empty_series, "DFA of an empty series");
  const auto y = detail::integrated_profile(rr.intervals());
  std::vector<double> f;
  f.reserve(scales.size());
  for (std::size_t n : scales)
    f.push_back(detail::fluctuation_at(y, n));
  return f;
}

std::vector<IndexVector> compute_track(const RrSeries &rr, const WindowSpec &spec) {
  const auto windows = sliding_windows(rr, spec);
  const double t0 = rr.start_time();
  std::vector<IndexVector> track;
  track.reserve(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k)
    track.push_back(compute_indices(windows[k], t0 + static_cast<double>(k) * spec.step_s, spec));
  return track;
}

} // namespace hrv::serial
