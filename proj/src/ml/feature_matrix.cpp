#include <algorithm>
#include <cmath>
#include <set>

#include "hrv/error.hpp"
#include "hrv/ml.hpp"

namespace hrv::ml {

FeatureMatrix::FeatureMatrix(std::vector<std::string> feature_names, std::vector<std::vector<double>> rows,
                             std::vector<int> labels, std::vector<double> times)
    : names_(std::move(feature_names)) {
  if (rows.size() != labels.size())
    throw Error(ErrorKind::invalid_argument, "row and label counts differ");
  if (!times.empty() && times.size() != rows.size())
    throw Error(ErrorKind::invalid_argument, "row and time counts differ");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != names_.size())
      throw Error(ErrorKind::invalid_argument, "row " + std::to_string(r) + " is not rectangular");
    if (std::any_of(rows[r].begin(), rows[r].end(), [](double v) { return !std::isfinite(v); })) {
      ++dropped_;
      continue;
    }
    rows_.push_back(std::move(rows[r]));
    labels_.push_back(labels[r]);
    if (!times.empty())
      times_.push_back(times[r]);
  }
}

std::vector<int> FeatureMatrix::classes() const {
  const std::set<int> distinct(labels_.begin(), labels_.end());
  return {distinct.begin(), distinct.end()};
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> row_indices) const {
  FeatureMatrix out;
  out.names_ = names_;
  for (std::size_t i : row_indices) {
    out.rows_.push_back(rows_.at(i));
    out.labels_.push_back(labels_.at(i));
    if (!times_.empty())
      out.times_.push_back(times_[i]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  std::vector<std::size_t> cols;
  for (const auto &n : names) {
    const auto it = std::find(names_.begin(), names_.end(), n);
    if (it == names_.end())
      throw Error(ErrorKind::invalid_argument, "unknown feature '" + n + "'");
    cols.push_back(static_cast<std::size_t>(it - names_.begin()));
  }
  FeatureMatrix out;
  out.names_.assign(names.begin(), names.end());
  out.labels_ = labels_;
  out.times_ = times_;
  out.dropped_ = dropped_;
  out.rows_.reserve(rows_.size());
  for (const auto &row : rows_) {
    std::vector<double> picked;
    picked.reserve(cols.size());
    for (std::size_t c : cols)
      picked.push_back(row[c]);
    out.rows_.push_back(std::move(picked));
  }
  return out;
}

Standardizer::Standardizer(const std::vector<std::vector<double>> &rows) {
  if (rows.empty())
    throw Error(ErrorKind::invalid_argument, "cannot standardise zero rows");
  const std::size_t p = rows.front().size();
  const auto n = static_cast<double>(rows.size());
  means_.assign(p, 0.0);
  scales_.assign(p, 1.0);
  for (const auto &row : rows)
    for (std::size_t j = 0; j < p; ++j)
      means_[j] += row[j];
  for (double &m : means_)
    m /= n;
  std::vector<double> ss(p, 0.0);
  for (const auto &row : rows)
    for (std::size_t j = 0; j < p; ++j)
      ss[j] += (row[j] - means_[j]) * (row[j] - means_[j]);
  for (std::size_t j = 0; j < p; ++j) {
    const double sd = std::sqrt(ss[j] / n);
    scales_[j] = sd > 0.0 ? sd : 1.0;
  }
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j)
    out[j] = (row[j] - means_[j]) / scales_[j];
  return out;
}

std::vector<std::vector<double>> Standardizer::apply(const std::vector<std::vector<double>> &rows) const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto &row : rows)
    out.push_back(apply(row));
  return out;
}

} // namespace hrv::ml
