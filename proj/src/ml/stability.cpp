#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <random>

#include "hrv/error.hpp"
#include "hrv/ml.hpp"

namespace hrv::ml {

namespace {

constexpr double kHitThreshold = 1e-8;

std::mt19937_64 resample_rng(std::uint64_t seed, std::size_t resample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(resample)};
  return std::mt19937_64(seq);
}

} // namespace

SelectionReport stability_select(const FeatureMatrix &fm, const StabilityOptions &options) {
  const auto classes = fm.classes();
  if (classes.size() < 2)
    throw Error(ErrorKind::class_too_small, "stability selection needs at least 2 classes");
  if (fm.num_rows() < 10 * classes.size())
    throw Error(ErrorKind::too_few_rows, "stability selection needs at least 10 rows per class");
  if (options.resamples == 0 || !(options.subsample_fraction > 0.0 && options.subsample_fraction <= 1.0) ||
      !(options.weakness > 0.0 && options.weakness <= 1.0) || options.lambda_grid.empty() ||
      std::any_of(options.lambda_grid.begin(), options.lambda_grid.end(), [](double l) { return !(l > 0.0); }))
    throw Error(ErrorKind::invalid_argument, "invalid stability-selection options");

  const std::size_t n = fm.num_rows();
  const std::size_t p = fm.num_features();
  const auto take = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor(options.subsample_fraction * static_cast<double>(n))));

  std::vector<int> y;
  for (int l : fm.labels())
    y.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin()));

  // Largest penalty first so each fit warm-starts from a sparser one.
  std::vector<double> grid = options.lambda_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  const std::size_t grid_size = grid.size();

  // hits[r][g][j]: resample r, grid penalty g, feature j.
  std::vector<std::vector<std::vector<char>>> hits(options.resamples,
                                                   std::vector<std::vector<char>>(grid_size));
  const auto count = static_cast<std::ptrdiff_t>(options.resamples);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    auto rng = resample_rng(options.seed, static_cast<std::size_t>(r));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(take);
    std::sort(order.begin(), order.end());

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    rows.reserve(take);
    for (std::size_t i : order) {
      rows.push_back(fm.rows()[i]);
      labels.push_back(y[i]);
    }
    rows = Standardizer(rows).apply(rows);
    std::uniform_real_distribution<double> weight(options.weakness, 1.0);
    std::vector<double> w(p);
    for (double &v : w)
      v = weight(rng);
    for (auto &row : rows)
      for (std::size_t j = 0; j < p; ++j)
        row[j] *= w[j];

    LogisticFit fit;
    for (std::size_t g = 0; g < grid_size; ++g) {
      LogisticOptions lo;
      lo.penalty = Penalty::l1;
      lo.lambda = grid[g] / std::sqrt(static_cast<double>(take));
      lo.max_sweeps = 300;
      lo.tolerance = 1e-5;
      fit = fit_multinomial_logistic(rows, labels, classes.size(), lo, g == 0 ? nullptr : &fit);
      auto &h = hits[static_cast<std::size_t>(r)][g];
      h.assign(p, 0);
      for (const auto &coef : fit.weights)
        for (std::size_t j = 0; j < p; ++j)
          if (std::abs(coef[j]) > kHitThreshold)
            h[j] = 1;
    }
  }

  SelectionReport report;
  report.feature_names = fm.feature_names();
  report.frequency.assign(p, 0.0);
  for (std::size_t g = 0; g < grid_size; ++g) {
    for (std::size_t j = 0; j < p; ++j) {
      std::size_t total = 0;
      for (const auto &h : hits)
        total += static_cast<std::size_t>(h[g][j]);
      report.frequency[j] = std::max(report.frequency[j],
                                     static_cast<double>(total) / static_cast<double>(options.resamples));
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    if (report.frequency[j] >= options.threshold)
      report.selected.push_back(report.feature_names[j]);
  return report;
}

} // namespace hrv::ml
