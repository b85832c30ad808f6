#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hrv::ml {

/// Rectangular numeric design matrix with integer class labels. Rows holding
/// undefined (NaN) values are dropped on construction.
class FeatureMatrix {
public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> feature_names, std::vector<std::vector<double>> rows,
                std::vector<int> labels, std::vector<double> times = {});

  const std::vector<std::string> &feature_names() const noexcept { return names_; }
  const std::vector<std::vector<double>> &rows() const noexcept { return rows_; }
  const std::vector<int> &labels() const noexcept { return labels_; }
  /// Window start time of each row; empty when unknown.
  const std::vector<double> &times() const noexcept { return times_; }
  std::size_t dropped_rows() const noexcept { return dropped_; }

  std::size_t num_rows() const noexcept { return rows_.size(); }
  std::size_t num_features() const noexcept { return names_.size(); }
  /// Sorted distinct labels.
  std::vector<int> classes() const;

  FeatureMatrix subset(std::span<const std::size_t> row_indices) const;
  /// Keeps the named columns in the given order.
  FeatureMatrix select_columns(std::span<const std::string> names) const;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> rows_;
  std::vector<int> labels_;
  std::vector<double> times_;
  std::size_t dropped_ = 0;
};

/// Column-wise z-scoring; zero-variance columns are only centred.
class Standardizer {
public:
  Standardizer() = default;
  explicit Standardizer(const std::vector<std::vector<double>> &rows);
  Standardizer(std::vector<double> means, std::vector<double> scales)
      : means_(std::move(means)), scales_(std::move(scales)) {}

  std::vector<double> apply(std::span<const double> row) const;
  std::vector<std::vector<double>> apply(const std::vector<std::vector<double>> &rows) const;
  const std::vector<double> &means() const noexcept { return means_; }
  const std::vector<double> &scales() const noexcept { return scales_; }

private:
  std::vector<double> means_;
  std::vector<double> scales_;
};

enum class Penalty { l1, l2 };

struct LogisticOptions {
  Penalty penalty = Penalty::l2;
  double lambda = 1e-2;
  std::size_t max_sweeps = 1000;
  double tolerance = 1e-7;
};

struct LogisticFit {
  std::vector<std::vector<double>> weights; ///< [class][feature]
  std::vector<double> intercepts;           ///< unpenalised
  std::size_t sweeps = 0;
};

/// Multinomial logistic regression minimising mean log-loss +
/// lambda * |w|_1 (or lambda/2 * |w|_2^2). Each sweep visits the classes in
/// turn: coordinate descent on the weighted least-squares model of the loss,
/// then a backtracking step so the objective never increases. `y` holds
/// class indices 0..K-1; `sweeps` counts outer sweeps.
/// `start`, when given, seeds the coefficients (warm start along a penalty path).
LogisticFit fit_multinomial_logistic(const std::vector<std::vector<double>> &x, std::span<const int> y,
                                     std::size_t num_classes, const LogisticOptions &options = {},
                                     const LogisticFit *start = nullptr);

enum class ClassifierKind { lr, knn, nb, dt };

inline constexpr ClassifierKind kAllClassifiers[] = {ClassifierKind::lr, ClassifierKind::knn,
                                                     ClassifierKind::nb, ClassifierKind::dt};

std::string_view to_string(ClassifierKind kind);
std::optional<ClassifierKind> classifier_from_string(std::string_view name);

inline constexpr std::size_t kMinRowsPerClass = 5;
inline constexpr std::size_t kNeighbours = 5;
inline constexpr std::size_t kMaxTreeDepth = 10;
inline constexpr double kVarianceFloor = 1e-9;

/// A trained classifier. LR: multinomial, L2. KNN: k = 5, Euclidean on raw
/// features. NB: Gaussian. DT: CART with Gini impurity, depth <= 10. LR and NB
/// standardise with statistics of their own training rows.
class Model {
public:
  static Model train(const FeatureMatrix &fm, ClassifierKind kind);

  int predict(std::span<const double> row) const;
  std::vector<int> predict(const FeatureMatrix &fm) const;
  double accuracy(const FeatureMatrix &fm) const;

  ClassifierKind kind() const noexcept;
  const std::vector<std::string> &feature_names() const noexcept;

  /// Versioned JSON document naming the kind, features and parameters.
  std::string serialize() const;
  static Model deserialize(std::string_view text);
  void save(const std::filesystem::path &path) const;
  static Model load(const std::filesystem::path &path);

  ~Model();
  Model(Model &&) noexcept;
  Model &operator=(Model &&) noexcept;

private:
  struct Impl;
  explicit Model(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

enum class FoldStrategy {
  shuffled,      ///< rows of each class shuffled, then dealt round-robin
  group_by_time, ///< rows of each class split into contiguous runs of time
};

/// Test-row indices of each fold. Every class count differs by at most one
/// across folds, and the folds partition the rows.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed,
                                                       FoldStrategy strategy = FoldStrategy::shuffled,
                                                       std::span<const double> times = {});

struct CvReport {
  ClassifierKind kind = ClassifierKind::lr;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0;
};

CvReport stratified_cv(const FeatureMatrix &fm, std::size_t k, ClassifierKind kind, std::uint64_t seed,
                       FoldStrategy strategy = FoldStrategy::shuffled);

/// Penalties tried for every resample, in units of 1/sqrt(subsample rows):
/// a pure-noise standardised feature has a loss gradient of that order, so
/// the same grid suits small and large designs. A feature's frequency is its
/// best hit rate over the grid.
inline constexpr double kStabilityLambdaGrid[] = {1.0, 1.4, 2.0};

struct StabilityOptions {
  std::size_t resamples = 200;
  double subsample_fraction = 0.75;
  double weakness = 0.5;
  double threshold = 0.6;
  std::uint64_t seed = 0;
  std::vector<double> lambda_grid{std::begin(kStabilityLambdaGrid), std::end(kStabilityLambdaGrid)};
};

struct SelectionReport {
  std::vector<std::string> feature_names;
  std::vector<double> frequency;
  std::vector<std::string> selected;
};

/// Stability selection with randomised L1 multinomial logistic regression.
/// Each resample draws rows without replacement, standardises them, scales
/// every column by U[weakness, 1] and fits one model per grid penalty. A
/// feature is hit when any of its class coefficients exceeds 1e-8 in
/// magnitude.
SelectionReport stability_select(const FeatureMatrix &fm, const StabilityOptions &options);

/// Table of accuracies: one row per group (recording or subject), one column
/// per classifier, and a closing average row.
struct CvTable {
  std::vector<std::string> groups;
  std::vector<ClassifierKind> kinds;
  std::vector<std::vector<double>> accuracy; ///< [group][kind], fraction in [0, 1]

  std::vector<double> column_means() const;
};

/// Percentages with 9 significant digits; header `group,<kinds...>`, last row `average`.
void write_cv_table_csv(const std::filesystem::path &path, const CvTable &table);
/// `feature,frequency,selected`
void write_selection_csv(const std::filesystem::path &path, const SelectionReport &report);

} // namespace hrv::ml
