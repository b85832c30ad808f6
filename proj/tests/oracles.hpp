#pragma once

// Direct-definition reference implementations used by the tests. They share
// no code with the library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "hrv/rr.hpp"

namespace oracle {

using Vec = std::vector<double>;

inline Vec intervals(const hrv::RrSeries &rr) { return {rr.intervals().begin(), rr.intervals().end()}; }

// RrSeries from intervals, first beat at t = 0.
inline hrv::RrSeries series(const Vec &ms, double first_beat_s = 0.0) {
  Vec onsets;
  double t = first_beat_s;
  for (double v : ms) {
    t += v / 1000.0;
    onsets.push_back(t);
  }
  return {ms, onsets};
}

inline Vec random_intervals(std::size_t n, std::uint64_t seed, double mean = 800.0, double sd = 50.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, sd);
  Vec v(n);
  for (auto &x : v)
    x = std::max(350.0, d(rng));
  return v;
}

inline long double sum(const Vec &v) {
  long double s = 0;
  for (double x : v)
    s += x;
  return s;
}

inline double mean(const Vec &v) { return static_cast<double>(sum(v) / static_cast<long double>(v.size())); }

// Two-pass population variance.
inline double variance(const Vec &v) {
  const long double m = sum(v) / static_cast<long double>(v.size());
  long double s = 0;
  for (double x : v)
    s += (x - m) * (x - m);
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline Vec diffs(const Vec &v) {
  Vec d;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    d.push_back(v[i + 1] - v[i]);
  return d;
}

inline double rmssd(const Vec &v) {
  long double s = 0;
  for (double d : diffs(v))
    s += static_cast<long double>(d) * d;
  return static_cast<double>(std::sqrt(s / static_cast<long double>(v.size() - 1)));
}

inline double sdsd(const Vec &v) { return std::sqrt(variance(diffs(v))); }

inline std::size_t pnn_count(const Vec &v, double x) {
  std::size_t c = 0;
  for (double d : diffs(v))
    if (std::fabs(d) > x)
      ++c;
  return c;
}

struct Poincare {
  double sd1, sd2;
};

// Rotates every (RR_i, RR_i+1) point by pi/4 explicitly.
inline Poincare poincare(const Vec &v) {
  Vec x1, x2;
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double x = v[i], y = v[i + 1];
    x1.push_back(c * x - s * y);
    x2.push_back(s * x + c * y);
  }
  return {std::sqrt(variance(x1)), std::sqrt(variance(x2))};
}

struct Matches {
  std::uint64_t b = 0, a = 0;
};

// Ordered pairs over explicit template vectors, halved at the end.
inline Matches sampen_counts(const Vec &v, std::size_t m, double r) {
  const std::size_t n = v.size() - m;
  auto dist = [&](std::size_t i, std::size_t j, std::size_t len) {
    Vec ti(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(i + len));
    Vec tj(v.begin() + static_cast<std::ptrdiff_t>(j), v.begin() + static_cast<std::ptrdiff_t>(j + len));
    double d = 0;
    for (std::size_t k = 0; k < len; ++k)
      d = std::max(d, std::fabs(ti[k] - tj[k]));
    return d;
  };
  Matches out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j)
        continue;
      if (dist(i, j, m) <= r)
        ++out.b;
      if (dist(i, j, m + 1) <= r)
        ++out.a;
    }
  out.a /= 2;
  out.b /= 2;
  return out;
}

// Textbook Lomb-Scargle on absolute times, tau from atan of the full sums.
inline Vec lomb_scargle(const hrv::RrSeries &rr, const Vec &freqs) {
  const Vec x = intervals(rr);
  const Vec t(rr.onsets().begin(), rr.onsets().end());
  const long double m = sum(x) / static_cast<long double>(x.size());
  const long double var = variance(x);
  Vec out;
  for (double f : freqs) {
    const long double w = 2 * std::numbers::pi_v<long double> * f;
    long double ss = 0, cc = 0;
    for (double ti : t) {
      ss += std::sin(2 * w * ti);
      cc += std::cos(2 * w * ti);
    }
    const long double tau = std::atan2(ss, cc) / (2 * w);
    long double xc = 0, xs = 0, c2 = 0, s2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double c = std::cos(w * (t[i] - tau)), s = std::sin(w * (t[i] - tau));
      xc += (x[i] - m) * c;
      xs += (x[i] - m) * s;
      c2 += c * c;
      s2 += s * s;
    }
    out.push_back(static_cast<double>((xc * xc / c2 + xs * xs / s2) / (2 * var)));
  }
  return out;
}

// F(n) with a per-box least-squares line from the normal equations on k = 1..n.
inline double dfa_fluctuation(const Vec &rr, std::size_t n) {
  const long double m = sum(rr) / static_cast<long double>(rr.size());
  std::vector<long double> y;
  long double acc = 0;
  for (double v : rr) {
    acc += v - m;
    y.push_back(acc);
  }
  const std::size_t boxes = y.size() / n;
  long double sq = 0;
  for (std::size_t b = 0; b < boxes; ++b) {
    long double sk = 0, sk2 = 0, sy = 0, sky = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const long double yy = y[b * n + k - 1];
      sk += k;
      sk2 += static_cast<long double>(k) * k;
      sy += yy;
      sky += k * yy;
    }
    const long double nn = n;
    const long double slope = (nn * sky - sk * sy) / (nn * sk2 - sk * sk);
    const long double icpt = (sy - slope * sk) / nn;
    for (std::size_t k = 1; k <= n; ++k) {
      const long double e = y[b * n + k - 1] - (icpt + slope * k);
      sq += e * e;
    }
  }
  return static_cast<double>(std::sqrt(sq / static_cast<long double>(boxes * n)));
}

// Mann-Whitney U of `a` by pair counting (ties count one half).
inline double mw_u(const Vec &a, const Vec &b) {
  double u = 0;
  for (double x : a)
    for (double y : b)
      u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  return u;
}

// Two-sided exact p by enumerating every split of the pooled ranks 1..n1+n2.
inline double mw_exact_p(std::size_t n1, std::size_t n2, double u_obs) {
  const std::size_t n = n1 + n2;
  std::uint64_t total = 0, le = 0, ge = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n1)
      continue;
    double rank_sum = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1)
        rank_sum += static_cast<double>(k + 1);
    const double u = rank_sum - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    ++total;
    if (u <= u_obs + 1e-9)
      ++le;
    if (u >= u_obs - 1e-9)
      ++ge;
  }
  const double p = 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total);
  return std::min(1.0, p);
}

} // namespace oracle
