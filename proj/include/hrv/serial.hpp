#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the
// per-item arithmetic with the parallel code and exist so tests and the
// benchmark can compare the two.

#include <span>
#include <vector>

#include "hrv/nonlinear.hpp"
#include "hrv/spectral.hpp"
#include "hrv/windowing.hpp"

namespace hrv::serial {

Periodogram lomb_scargle(const RrSeries &rr, std::span<const double> grid_hz);
TemplateMatches sample_entropy_matches(std::span<const double> x, std::size_t m, double r);
std::vector<double> dfa_fluctuations(const RrSeries &rr, std::span<const std::size_t> scales);
std::vector<IndexVector> compute_track(const RrSeries &rr, const WindowSpec &spec);

} // namespace hrv::serial
