#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "hrv/error.hpp"
#include "hrv/ml.hpp"

namespace hrv::ml {

using nlohmann::json;

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
  case ClassifierKind::lr: return "lr";
  case ClassifierKind::knn: return "knn";
  case ClassifierKind::nb: return "nb";
  case ClassifierKind::dt: return "dt";
  }
  return "unknown";
}

std::optional<ClassifierKind> classifier_from_string(std::string_view name) {
  for (auto kind : kAllClassifiers)
    if (to_string(kind) == name)
      return kind;
  return std::nullopt;
}

namespace {

constexpr int kFormatVersion = 1;

struct Logistic {
  Standardizer scaler;
  LogisticFit fit;
};

struct Knn {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

struct NaiveBayes {
  Standardizer scaler;
  std::vector<double> log_prior;             // [class]
  std::vector<std::vector<double>> mean;     // [class][feature]
  std::vector<std::vector<double>> variance; // [class][feature]
};

struct TreeNode {
  int feature = -1; // -1 marks a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  int label = 0; // class index
};

struct Tree {
  std::vector<TreeNode> nodes;
};

using Params = std::variant<Logistic, Knn, NaiveBayes, Tree>;

// Class indices into `classes` for each label.
std::vector<int> encode(const std::vector<int> &labels, const std::vector<int> &classes) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels)
    out.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin()));
  return out;
}

int argmax(const std::vector<double> &v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

// ---- decision tree ----

class TreeBuilder {
public:
  TreeBuilder(const std::vector<std::vector<double>> &x, const std::vector<int> &y, std::size_t k)
      : x_(x), y_(y), k_(k) {}

  Tree build() {
    std::vector<std::size_t> all(x_.size());
    std::iota(all.begin(), all.end(), 0);
    grow(all, 0);
    return std::move(tree_);
  }

private:
  std::vector<std::size_t> counts(const std::vector<std::size_t> &rows) const {
    std::vector<std::size_t> c(k_, 0);
    for (std::size_t r : rows)
      ++c[static_cast<std::size_t>(y_[r])];
    return c;
  }

  static double gini(const std::vector<std::size_t> &c, std::size_t total) {
    if (total == 0)
      return 0.0;
    double s = 1.0;
    for (std::size_t v : c) {
      const double q = static_cast<double>(v) / static_cast<double>(total);
      s -= q * q;
    }
    return s;
  }

  int grow(const std::vector<std::size_t> &rows, std::size_t depth) {
    const auto node_index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    const auto c = counts(rows);
    tree_.nodes[static_cast<std::size_t>(node_index)].label =
        static_cast<int>(std::max_element(c.begin(), c.end()) - c.begin());
    const double impurity = gini(c, rows.size());
    if (depth >= kMaxTreeDepth || rows.size() < 2 || impurity == 0.0)
      return node_index;

    const std::size_t n = rows.size();
    double best_score = impurity * static_cast<double>(n) - 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < x_.front().size(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x_[a][f] < x_[b][f] || (x_[a][f] == x_[b][f] && a < b);
      });
      std::vector<std::size_t> left(k_, 0);
      std::vector<std::size_t> right = c;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto cls = static_cast<std::size_t>(y_[order[i]]);
        ++left[cls];
        --right[cls];
        const double here = x_[order[i]][f];
        const double next = x_[order[i + 1]][f];
        if (here == next)
          continue;
        const double score = gini(left, i + 1) * static_cast<double>(i + 1) +
                             gini(right, n - i - 1) * static_cast<double>(n - i - 1);
        if (score < best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (here + next);
        }
      }
    }
    if (best_feature < 0)
      return node_index;

    std::vector<std::size_t> lrows, rrows;
    for (std::size_t r : rows)
      (x_[r][static_cast<std::size_t>(best_feature)] <= best_threshold ? lrows : rrows).push_back(r);
    const int l = grow(lrows, depth + 1);
    const int r = grow(rrows, depth + 1);
    auto &node = tree_.nodes[static_cast<std::size_t>(node_index)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return node_index;
  }

  const std::vector<std::vector<double>> &x_;
  const std::vector<int> &y_;
  std::size_t k_;
  Tree tree_;
};

// ---- prediction ----

int predict_index(const Logistic &m, std::span<const double> row) {
  const auto z = m.scaler.apply(row);
  std::vector<double> score(m.fit.intercepts);
  for (std::size_t c = 0; c < score.size(); ++c)
    for (std::size_t j = 0; j < z.size(); ++j)
      score[c] += m.fit.weights[c][j] * z[j];
  return argmax(score);
}

int predict_index(const Knn &m, std::span<const double> row) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(m.rows.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j)
      d += (m.rows[i][j] - row[j]) * (m.rows[i][j] - row[j]);
    dist.emplace_back(d, i);
  }
  const std::size_t k = std::min(kNeighbours, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::map<int, std::size_t> votes;
  for (std::size_t i = 0; i < k; ++i)
    ++votes[m.labels[dist[i].second]];
  std::size_t top = 0;
  for (const auto &[label, v] : votes)
    top = std::max(top, v);
  // Ties go to the class of the nearest tied neighbour.
  for (std::size_t i = 0; i < k; ++i) {
    const int label = m.labels[dist[i].second];
    if (votes[label] == top)
      return label;
  }
  return m.labels[dist.front().second];
}

int predict_index(const NaiveBayes &m, std::span<const double> row) {
  const auto z = m.scaler.apply(row);
  std::vector<double> score(m.log_prior);
  for (std::size_t c = 0; c < score.size(); ++c)
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double v = m.variance[c][j];
      const double d = z[j] - m.mean[c][j];
      score[c] += -0.5 * std::log(2.0 * std::numbers::pi * v) - 0.5 * d * d / v;
    }
  return argmax(score);
}

int predict_index(const Tree &m, std::span<const double> row) {
  std::size_t at = 0;
  while (m.nodes[at].feature >= 0) {
    const auto &node = m.nodes[at];
    at = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                 : node.right);
  }
  return m.nodes[at].label;
}

// ---- serialisation ----

json scaler_json(const Standardizer &s) { return {{"means", s.means()}, {"scales", s.scales()}}; }

Standardizer scaler_from(const json &j) {
  return Standardizer(j.at("means").get<std::vector<double>>(), j.at("scales").get<std::vector<double>>());
}

json params_json(const Params &params) {
  return std::visit(
      [](const auto &m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Logistic>) {
          return {{"scaler", scaler_json(m.scaler)}, {"weights", m.fit.weights}, {"intercepts", m.fit.intercepts}};
        } else if constexpr (std::is_same_v<T, Knn>) {
          return {{"k", kNeighbours}, {"rows", m.rows}, {"labels", m.labels}};
        } else if constexpr (std::is_same_v<T, NaiveBayes>) {
          return {{"scaler", scaler_json(m.scaler)},
                  {"log_prior", m.log_prior},
                  {"mean", m.mean},
                  {"variance", m.variance}};
        } else {
          json nodes = json::array();
          for (const auto &n : m.nodes)
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
          return {{"nodes", nodes}};
        }
      },
      params);
}

Params params_from(ClassifierKind kind, const json &j) {
  switch (kind) {
  case ClassifierKind::lr: {
    Logistic m;
    m.scaler = scaler_from(j.at("scaler"));
    m.fit.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.fit.intercepts = j.at("intercepts").get<std::vector<double>>();
    return m;
  }
  case ClassifierKind::knn:
    return Knn{j.at("rows").get<std::vector<std::vector<double>>>(), j.at("labels").get<std::vector<int>>()};
  case ClassifierKind::nb: {
    NaiveBayes m;
    m.scaler = scaler_from(j.at("scaler"));
    m.log_prior = j.at("log_prior").get<std::vector<double>>();
    m.mean = j.at("mean").get<std::vector<std::vector<double>>>();
    m.variance = j.at("variance").get<std::vector<std::vector<double>>>();
    return m;
  }
  case ClassifierKind::dt: {
    Tree t;
    for (const auto &n : j.at("nodes"))
      t.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                         n.at(4).get<int>()});
    return t;
  }
  }
  throw Error(ErrorKind::parse_error, "unknown classifier kind");
}

} // namespace

struct Model::Impl {
  ClassifierKind kind;
  std::vector<std::string> feature_names;
  std::vector<int> classes;
  Params params;
};

Model::Model(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Model::~Model() = default;
Model::Model(Model &&) noexcept = default;
Model &Model::operator=(Model &&) noexcept = default;

ClassifierKind Model::kind() const noexcept { return impl_->kind; }
const std::vector<std::string> &Model::feature_names() const noexcept { return impl_->feature_names; }

Model Model::train(const FeatureMatrix &fm, ClassifierKind kind) {
  const auto classes = fm.classes();
  if (classes.size() < 2)
    throw Error(ErrorKind::class_too_small, "training needs at least 2 classes");
  const auto y = encode(fm.labels(), classes);
  std::vector<std::size_t> per_class(classes.size(), 0);
  for (int c : y)
    ++per_class[static_cast<std::size_t>(c)];
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (per_class[c] < kMinRowsPerClass)
      throw Error(ErrorKind::class_too_small, "class " + std::to_string(classes[c]) + " has fewer than " +
                                                  std::to_string(kMinRowsPerClass) + " rows");

  auto impl = std::make_unique<Impl>();
  impl->kind = kind;
  impl->feature_names = fm.feature_names();
  impl->classes = classes;
  const std::size_t k = classes.size();

  switch (kind) {
  case ClassifierKind::lr: {
    Logistic m{Standardizer(fm.rows()), {}};
    m.fit = fit_multinomial_logistic(m.scaler.apply(fm.rows()), y, k, LogisticOptions{});
    impl->params = std::move(m);
    break;
  }
  case ClassifierKind::knn:
    impl->params = Knn{fm.rows(), y};
    break;
  case ClassifierKind::nb: {
    NaiveBayes m;
    m.scaler = Standardizer(fm.rows());
    const auto z = m.scaler.apply(fm.rows());
    const std::size_t p = fm.num_features();
    m.mean.assign(k, std::vector<double>(p, 0.0));
    m.variance.assign(k, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = 0; j < p; ++j)
        m.mean[static_cast<std::size_t>(y[i])][j] += z[i][j];
    for (std::size_t c = 0; c < k; ++c)
      for (double &v : m.mean[c])
        v /= static_cast<double>(per_class[c]);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto c = static_cast<std::size_t>(y[i]);
      for (std::size_t j = 0; j < p; ++j)
        m.variance[c][j] += (z[i][j] - m.mean[c][j]) * (z[i][j] - m.mean[c][j]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (double &v : m.variance[c])
        v = std::max(v / static_cast<double>(per_class[c]), kVarianceFloor);
      m.log_prior.push_back(std::log(static_cast<double>(per_class[c]) / static_cast<double>(z.size())));
    }
    impl->params = std::move(m);
    break;
  }
  case ClassifierKind::dt:
    impl->params = TreeBuilder(fm.rows(), y, k).build();
    break;
  }
  return Model(std::move(impl));
}

int Model::predict(std::span<const double> row) const {
  if (row.size() != impl_->feature_names.size())
    throw Error(ErrorKind::invalid_argument, "row width does not match the model");
  const int index = std::visit([&](const auto &m) { return predict_index(m, row); }, impl_->params);
  return impl_->classes[static_cast<std::size_t>(index)];
}

std::vector<int> Model::predict(const FeatureMatrix &fm) const {
  std::vector<int> out;
  out.reserve(fm.num_rows());
  for (const auto &row : fm.rows())
    out.push_back(predict(row));
  return out;
}

double Model::accuracy(const FeatureMatrix &fm) const {
  if (fm.num_rows() == 0)
    throw Error(ErrorKind::invalid_argument, "accuracy of zero rows");
  const auto pred = predict(fm);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    hits += pred[i] == fm.labels()[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

std::string Model::serialize() const {
  const json doc{{"format", "hrv-model"},
                 {"version", kFormatVersion},
                 {"kind", to_string(impl_->kind)},
                 {"feature_names", impl_->feature_names},
                 {"classes", impl_->classes},
                 {"params", params_json(impl_->params)}};
  return doc.dump(1);
}

Model Model::deserialize(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    if (doc.at("format") != "hrv-model")
      throw Error(ErrorKind::parse_error, "not an hrv-model document");
    if (doc.at("version").get<int>() != kFormatVersion)
      throw Error(ErrorKind::parse_error, "unsupported model version");
    const auto kind = classifier_from_string(doc.at("kind").get<std::string>());
    if (!kind)
      throw Error(ErrorKind::parse_error, "unknown classifier kind");
    auto impl = std::make_unique<Impl>();
    impl->kind = *kind;
    impl->feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    impl->classes = doc.at("classes").get<std::vector<int>>();
    impl->params = params_from(*kind, doc.at("params"));
    return Model(std::move(impl));
  } catch (const json::exception &e) {
    throw Error(ErrorKind::parse_error, std::string("malformed model: ") + e.what());
  }
}

void Model::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io_error, "cannot write " + path.string());
  out << serialize() << '\n';
}

Model Model::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io_error, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

} // namespace hrv::ml
