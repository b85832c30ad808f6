#include "hrv/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "detail/nonlinear_kernels.hpp"
#include "hrv/error.hpp"
#include "hrv/timedomain.hpp"

namespace hrv {

namespace {

double population_variance(const std::vector<double> &v) {
  double mean = 0.0;
  for (double x : v)
    mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v)
    ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

} // namespace

PoincareDescriptors poincare(const RrSeries &rr) {
  if (rr.size() < 3)
    throw Error(ErrorKind::too_short, "Poincare descriptors need at least 3 intervals");
  const auto v = rr.intervals();
  std::vector<double> minor(v.size() - 1);
  std::vector<double> major(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    minor[i] = (v[i] - v[i + 1]) / std::numbers::sqrt2;
    major[i] = (v[i] + v[i + 1]) / std::numbers::sqrt2;
  }
  PoincareDescriptors out;
  out.sd1 = std::sqrt(population_variance(minor));
  out.sd2 = std::sqrt(population_variance(major));
  if (out.sd2 > 0.0)
    out.ratio = out.sd1 / out.sd2;
  return out;
}

TemplateMatches sample_entropy_matches(std::span<const double> x, std::size_t m, double r) {
  if (x.size() < m + 2)
    throw Error(ErrorKind::too_short, "sample entropy needs at least m + 2 points");
  const auto templates = static_cast<std::ptrdiff_t>(x.size() - m);
  std::uint64_t b = 0;
  std::uint64_t a = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : a, b)
  for (std::ptrdiff_t i = 0; i < templates; ++i)
    detail::count_matches_from(x, m, r, static_cast<std::size_t>(i), b, a);
  return {b, a};
}

SampleEntropy sample_entropy(const RrSeries &rr, std::size_t m, double r_ms) {
  if (rr.size() < m + 2)
    throw Error(ErrorKind::too_short, "sample entropy needs at least m + 2 intervals, got " +
                                          std::to_string(rr.size()));
  if (r_ms < 0.0 || !std::isfinite(r_ms))
    throw Error(ErrorKind::invalid_argument, "tolerance must be a non-negative finite value");
  SampleEntropy out;
  if (r_ms == 0.0) {
    out.value = 0.0;
    out.status = SampEnStatus::degenerate_tolerance;
    return out;
  }
  out.matches = sample_entropy_matches(rr.intervals(), m, r_ms);
  if (out.matches.length_m == 0 || out.matches.length_m1 == 0) {
    out.status = SampEnStatus::no_matches;
    return out;
  }
  out.value = -std::log(static_cast<double>(out.matches.length_m1) /
                        static_cast<double>(out.matches.length_m));
  return out;
}

SampleEntropy sample_entropy(const RrSeries &rr) { return sample_entropy(rr, 2, 0.2 * sdrr(rr)); }

std::vector<double> dfa_fluctuations(const RrSeries &rr, std::span<const std::size_t> scales) {
  if (rr.empty())
    throw Error(ErrorKind::empty_series, "DFA of an empty series");
  const auto y = detail::integrated_profile(rr.intervals());
  std::vector<double> f(scales.size());
  const auto count = static_cast<std::ptrdiff_t>(scales.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < count; ++s)
    f[static_cast<std::size_t>(s)] = detail::fluctuation_at(y, scales[static_cast<std::size_t>(s)]);
  return f;
}

namespace {

std::vector<std::size_t> scales_in(ScaleRange range) {
  std::vector<std::size_t> out;
  for (std::size_t n = range.lo; n <= range.hi; ++n)
    out.push_back(n);
  return out;
}

// Relative floor below which F(n) is treated as a perfect fit.
double fluctuation_floor(std::span<const double> rr) {
  double scale = 0.0;
  for (double v : rr)
    scale = std::max(scale, std::abs(v));
  return 1e-12 * scale;
}

} // namespace

double dfa_exponent(const RrSeries &rr, ScaleRange range) {
  if (rr.size() < kMinDfaLength)
    throw Error(ErrorKind::too_short, "DFA needs at least " + std::to_string(kMinDfaLength) +
                                          " intervals, got " + std::to_string(rr.size()));
  if (range.lo < 2 || range.hi < range.lo)
    throw Error(ErrorKind::invalid_argument, "invalid DFA scale range");
  const auto scales = scales_in(range);
  const auto f = dfa_fluctuations(rr, scales);
  const double floor = fluctuation_floor(rr.intervals());

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (rr.size() / scales[k] == 0 || !(f[k] > floor))
      continue;
    lx.push_back(std::log2(static_cast<double>(scales[k])));
    ly.push_back(std::log2(f[k]));
  }
  if (lx.size() < 3)
    throw Error(ErrorKind::degenerate_fit, "fewer than 3 usable DFA scales");

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxy / sxx;
}

DfaExponents dfa(const RrSeries &rr, ScaleRange short_range, ScaleRange long_range) {
  if (rr.size() < kMinDfaLength)
    throw Error(ErrorKind::too_short, "DFA needs at least " + std::to_string(kMinDfaLength) +
                                          " intervals, got " + std::to_string(rr.size()));
  DfaExponents out;
  try {
    out.alpha1 = dfa_exponent(rr, short_range);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::degenerate_fit)
      throw;
  }
  try {
    out.alpha2 = dfa_exponent(rr, long_range);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::degenerate_fit)
      throw;
  }
  return out;
}

} // namespace hrv
