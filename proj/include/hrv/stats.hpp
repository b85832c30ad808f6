#pragma once

#include <span>
#include <string>
#include <vector>

namespace hrv {

struct TestResult {
  double statistic = 0;
  double p_value = 1;
  std::string method;
};

enum class PValueMethod {
  automatic, ///< exact when n1 + n2 <= 16 and tie-free, otherwise normal
  exact,
  normal,
};

inline constexpr std::size_t kMaxExactMannWhitney = 16;

/// Two-sided Mann-Whitney U test. `statistic` is U for the first sample,
/// computed with midranks. The normal approximation applies tie and
/// continuity corrections.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          PValueMethod method = PValueMethod::automatic);

/// Brown-Forsythe flavour of Levene's test for equal variances: one-way ANOVA
/// on absolute deviations from the group medians, p-value from F(k-1, N-k).
TestResult levene(const std::vector<std::vector<double>> &groups);

} // namespace hrv
