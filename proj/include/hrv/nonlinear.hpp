#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hrv/rr.hpp"

namespace hrv {

struct PoincareDescriptors {
  double sd1 = 0;
  double sd2 = 0;
  std::optional<double> ratio; ///< sd1 / sd2, empty when sd2 == 0
};

/// Dispersion of the (RR_i, RR_i+1) cloud along the axes rotated by pi/4.
PoincareDescriptors poincare(const RrSeries &rr);

/// Pair counts over the N - m templates: `length_m` is B, `length_m1` is A.
struct TemplateMatches {
  std::uint64_t length_m = 0;
  std::uint64_t length_m1 = 0;
  friend bool operator==(const TemplateMatches &, const TemplateMatches &) = default;
};

/// Chebyshev-distance template matching, self-matches excluded.
TemplateMatches sample_entropy_matches(std::span<const double> x, std::size_t m, double r);

enum class SampEnStatus { ok, degenerate_tolerance, no_matches };

struct SampleEntropy {
  std::optional<double> value; ///< empty when no matches were found
  TemplateMatches matches;
  SampEnStatus status = SampEnStatus::ok;
};

/// -ln(A / B). A zero tolerance (a constant series) yields 0 with
/// `degenerate_tolerance` set.
SampleEntropy sample_entropy(const RrSeries &rr, std::size_t m, double r_ms);
/// m = 2, r = 0.2 * SDRR.
SampleEntropy sample_entropy(const RrSeries &rr);

struct ScaleRange {
  std::size_t lo;
  std::size_t hi; // inclusive
};

inline constexpr ScaleRange kShortTermScales{4, 16};
inline constexpr ScaleRange kLongTermScales{16, 64};
inline constexpr std::size_t kMinDfaLength = 128;

struct DfaExponents {
  std::optional<double> alpha1; ///< empty: fewer than 3 usable scales
  std::optional<double> alpha2;
};

/// RMS fluctuation F(n) of the integrated, box-wise linearly detrended series
/// for each box size. Boxes do not overlap; the tail that does not fill a box
/// is dropped.
std::vector<double> dfa_fluctuations(const RrSeries &rr, std::span<const std::size_t> scales);

/// Least-squares slope of log2 F(n) against log2 n over every integer n in
/// `range`. Throws DegenerateFit with fewer than 3 scales where F(n) > 0.
double dfa_exponent(const RrSeries &rr, ScaleRange range);

DfaExponents dfa(const RrSeries &rr, ScaleRange short_range = kShortTermScales,
                 ScaleRange long_range = kLongTermScales);

} // namespace hrv
