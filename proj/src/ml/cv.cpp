#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "hrv/error.hpp"
#include "hrv/ml.hpp"

namespace hrv::ml {

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed, FoldStrategy strategy,
                                                       std::span<const double> times) {
  if (k < 2)
    throw Error(ErrorKind::invalid_argument, "need at least 2 folds");
  if (strategy == FoldStrategy::group_by_time && times.size() != labels.size())
    throw Error(ErrorKind::invalid_argument, "time-grouped folds need one time per row");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(i);
  for (const auto &[label, rows] : by_class)
    if (rows.size() < k)
      throw Error(ErrorKind::class_too_small, "class " + std::to_string(label) + " has " +
                                                  std::to_string(rows.size()) + " rows for " +
                                                  std::to_string(k) + " folds");

  std::vector<std::vector<std::size_t>> folds(k);
  std::mt19937_64 rng(seed);
  // Carrying the position across classes keeps total fold sizes balanced too.
  std::size_t position = 0;
  for (auto &[label, rows] : by_class) {
    if (strategy == FoldStrategy::shuffled) {
      std::shuffle(rows.begin(), rows.end(), rng);
      for (std::size_t r : rows)
        folds[position++ % k].push_back(r);
    } else {
      std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
      const std::size_t base = rows.size() / k;
      const std::size_t extra = rows.size() % k;
      std::size_t at = 0;
      for (std::size_t f = 0; f < k; ++f) {
        const std::size_t fold = (position + f) % k;
        const std::size_t size = base + (f < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i)
          folds[fold].push_back(rows[at++]);
      }
      position += extra;
    }
  }
  for (auto &f : folds)
    std::sort(f.begin(), f.end());
  return folds;
}

CvReport stratified_cv(const FeatureMatrix &fm, std::size_t k, ClassifierKind kind, std::uint64_t seed,
                       FoldStrategy strategy) {
  const auto folds = stratified_folds(fm.labels(), k, seed, strategy, fm.times());
  CvReport report;
  report.kind = kind;
  report.fold_accuracy.assign(k, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(k);
  // Training errors surface after the loop; exceptions cannot leave an OpenMP region.
  std::vector<std::string> failures(k);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t f = 0; f < count; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    try {
      std::vector<bool> held_out(fm.num_rows(), false);
      for (std::size_t r : folds[fi])
        held_out[r] = true;
      std::vector<std::size_t> train_rows;
      for (std::size_t r = 0; r < fm.num_rows(); ++r)
        if (!held_out[r])
          train_rows.push_back(r);
      const auto model = Model::train(fm.subset(train_rows), kind);
      report.fold_accuracy[fi] = model.accuracy(fm.subset(folds[fi]));
    } catch (const std::exception &e) {
      failures[fi] = e.what();
    }
  }
  for (const auto &msg : failures)
    if (!msg.empty())
      throw Error(ErrorKind::class_too_small, "cross-validation fold failed: " + msg);
  report.mean_accuracy =
      std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) / static_cast<double>(k);
  return report;
}

std::vector<double> CvTable::column_means() const {
  std::vector<double> out(kinds.size(), 0.0);
  for (const auto &row : accuracy)
    for (std::size_t c = 0; c < kinds.size(); ++c)
      out[c] += row[c];
  for (double &v : out)
    v /= static_cast<double>(accuracy.size());
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open(const std::filesystem::path &path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io_error, "cannot write " + path.string());
  return out;
}

} // namespace

void write_cv_table_csv(const std::filesystem::path &path, const CvTable &table) {
  auto out = open(path);
  out << "group";
  for (auto kind : table.kinds)
    out << ',' << to_string(kind);
  out << '\n';
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    out << table.groups[g];
    for (double a : table.accuracy[g])
      out << ',' << fmt(100.0 * a);
    out << '\n';
  }
  out << "average";
  for (double a : table.column_means())
    out << ',' << fmt(100.0 * a);
  out << '\n';
}

void write_selection_csv(const std::filesystem::path &path, const SelectionReport &report) {
  auto out = open(path);
  out << "feature,frequency,selected\n";
  for (std::size_t j = 0; j < report.feature_names.size(); ++j) {
    const bool chosen = std::find(report.selected.begin(), report.selected.end(), report.feature_names[j]) !=
                        report.selected.end();
    out << report.feature_names[j] << ',' << fmt(report.frequency[j]) << ',' << (chosen ? 1 : 0) << '\n';
  }
}

} // namespace hrv::ml
