#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace hrv::detail {

// One frequency of the normalised periodogram. `x` is mean-centred, `t` is
// relative to the first onset.
inline double lsp_at(double freq_hz, std::span<const double> t, std::span<const double> x,
                     double variance) {
  const double w = 2.0 * std::numbers::pi * freq_hz;
  double s2 = 0.0, c2 = 0.0;
  for (double ti : t) {
    const double s = std::sin(w * ti);
    const double c = std::cos(w * ti);
    s2 += 2.0 * s * c;
    c2 += c * c - s * s;
  }
  const double wtau = 0.5 * std::atan2(s2, c2);
  const double cos_tau = std::cos(wtau);
  const double sin_tau = std::sin(wtau);
  double xc = 0.0, xs = 0.0, cc = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = std::sin(w * t[i]);
    const double c = std::cos(w * t[i]);
    const double cs = c * cos_tau + s * sin_tau; // cos(w (t - tau))
    const double sn = s * cos_tau - c * sin_tau; // sin(w (t - tau))
    xc += x[i] * cs;
    xs += x[i] * sn;
    cc += cs * cs;
    ss += sn * sn;
  }
  double p = 0.0;
  if (cc > 0.0)
    p += xc * xc / cc;
  if (ss > 0.0)
    p += xs * xs / ss;
  return p / (2.0 * variance);
}

} // namespace hrv::detail
