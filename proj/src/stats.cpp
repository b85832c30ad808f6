#include "hrv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>

#include "hrv/error.hpp"

namespace hrv {

namespace {

struct Ranking {
  std::vector<double> ranks; // midranks, a's first then b's
  double tie_term = 0;       // sum over tie groups of t^3 - t
  bool has_ties = false;
};

Ranking midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  Ranking out;
  out.ranks.resize(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]])
      ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      out.ranks[order[k]] = rank;
    const auto t = static_cast<double>(j - i + 1);
    if (t > 1) {
      out.tie_term += t * t * t - t;
      out.has_ties = true;
    }
    i = j + 1;
  }
  return out;
}

// counts[u] = number of arrangements of n1 + n2 distinct values giving U = u.
std::vector<double> u_distribution(std::size_t n1, std::size_t n2) {
  // table[i][j] holds the distribution for sample sizes (i, j).
  std::vector<std::vector<std::vector<double>>> table(n1 + 1, std::vector<std::vector<double>>(n2 + 1));
  for (std::size_t i = 0; i <= n1; ++i) {
    for (std::size_t j = 0; j <= n2; ++j) {
      auto &dist = table[i][j];
      dist.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        dist[0] = 1.0;
        continue;
      }
      // The largest value belongs to sample a (adds j to U) or to sample b.
      const auto &with_a = table[i - 1][j];
      const auto &with_b = table[i][j - 1];
      for (std::size_t u = 0; u < with_a.size(); ++u)
        dist[u + j] += with_a[u];
      for (std::size_t u = 0; u < with_b.size(); ++u)
        dist[u] += with_b[u];
    }
  }
  return table[n1][n2];
}

double exact_p(double u, std::size_t n1, std::size_t n2) {
  const auto dist = u_distribution(n1, n2);
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  const auto k = static_cast<std::size_t>(std::llround(u));
  double lower = 0.0, upper = 0.0;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (v <= k)
      lower += dist[v];
    if (v >= k)
      upper += dist[v];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

double normal_p(double u, std::size_t n1, std::size_t n2, double tie_term) {
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  const double n = a + b;
  const double mu = a * b / 2.0;
  const double var = a * b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0))
    return 1.0;
  const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, PValueMethod method) {
  if (a.empty() || b.empty())
    throw Error(ErrorKind::empty_sample, "Mann-Whitney needs two non-empty samples");
  const auto ranking = midranks(a, b);
  const double n1 = static_cast<double>(a.size());
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    rank_sum += ranking.ranks[i];

  TestResult out;
  out.statistic = rank_sum - n1 * (n1 + 1.0) / 2.0;

  const bool exact_ok = !ranking.has_ties;
  const bool small = a.size() + b.size() <= kMaxExactMannWhitney;
  if (method == PValueMethod::exact && !exact_ok)
    throw Error(ErrorKind::invalid_argument, "exact Mann-Whitney p-value requires tie-free samples");
  const bool use_exact =
      method == PValueMethod::exact || (method == PValueMethod::automatic && exact_ok && small);
  if (use_exact) {
    out.p_value = exact_p(out.statistic, a.size(), b.size());
    out.method = "mann-whitney-exact";
  } else {
    out.p_value = normal_p(out.statistic, a.size(), b.size(), ranking.tie_term);
    out.method = "mann-whitney-normal";
  }
  return out;
}

TestResult levene(const std::vector<std::vector<double>> &groups) {
  if (groups.size() < 2)
    throw Error(ErrorKind::too_few_groups, "Levene's test needs at least 2 groups");
  for (const auto &g : groups)
    if (g.size() < 2)
      throw Error(ErrorKind::too_few_groups, "each Levene group needs at least 2 values");

  std::vector<std::vector<double>> dev;
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto &g : groups) {
    const double med = median(g);
    auto &d = dev.emplace_back();
    for (double v : g) {
      d.push_back(std::abs(v - med));
      grand += d.back();
    }
    total += g.size();
  }
  grand /= static_cast<double>(total);

  double between = 0.0, within = 0.0;
  for (const auto &d : dev) {
    const double m = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    between += static_cast<double>(d.size()) * (m - grand) * (m - grand);
    for (double z : d)
      within += (z - m) * (z - m);
  }
  const double k = static_cast<double>(groups.size());
  const double n = static_cast<double>(total);

  TestResult out;
  out.method = "levene-median";
  if (within == 0.0) {
    // Every group has identical absolute deviations around its own median.
    out.statistic = between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    out.p_value = between == 0.0 ? 1.0 : 0.0;
    if (!std::isfinite(out.statistic))
      out.statistic = std::numeric_limits<double>::max();
    return out;
  }
  out.statistic = (n - k) / (k - 1.0) * between / within;
  const boost::math::fisher_f dist(k - 1.0, n - k);
  out.p_value = std::clamp(boost::math::cdf(boost::math::complement(dist, out.statistic)), 0.0, 1.0);
  return out;
}

} // namespace hrv
