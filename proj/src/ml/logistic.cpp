#include <algorithm>
#include <cmath>

#include "hrv/error.hpp"
#include "hrv/ml.hpp"

namespace hrv::ml {

namespace {

constexpr double kMinWeight = 1e-5;
constexpr std::size_t kMaxInnerSweeps = 200;
constexpr int kMaxHalvings = 30;

double soft_threshold(double z, double t) {
  if (z > t)
    return z - t;
  if (z < -t)
    return z + t;
  return 0.0;
}

struct Problem {
  const std::vector<std::vector<double>> &cols; // [feature][row]
  std::span<const int> y;
  std::size_t n, p, k;
  const LogisticOptions &opt;
};

double penalty(const Problem &pb, const LogisticFit &fit) {
  double s = 0.0;
  for (const auto &w : fit.weights)
    for (double v : w)
      s += pb.opt.penalty == Penalty::l1 ? std::abs(v) : 0.5 * v * v;
  return pb.opt.lambda * s;
}

// eta[i*k + c] from the current coefficients; returns mean log-loss and fills prob.
double refresh(const Problem &pb, const LogisticFit &fit, std::vector<double> &eta, std::vector<double> &prob) {
  const std::size_t n = pb.n, k = pb.k;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c)
      eta[i * k + c] = fit.intercepts[c];
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < pb.p; ++j) {
      const double w = fit.weights[c][j];
      if (w == 0.0)
        continue;
      const double *col = pb.cols[j].data();
      for (std::size_t i = 0; i < n; ++i)
        eta[i * k + c] += w * col[i];
    }
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double *e = &eta[i * k];
    double *q = &prob[i * k];
    const double top = *std::max_element(e, e + k);
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      q[c] = std::exp(e[c] - top);
      sum += q[c];
    }
    for (std::size_t c = 0; c < k; ++c)
      q[c] /= sum;
    loss -= e[static_cast<std::size_t>(pb.y[i])] - top - std::log(sum);
  }
  return loss / static_cast<double>(n);
}

} // namespace

LogisticFit fit_multinomial_logistic(const std::vector<std::vector<double>> &x, std::span<const int> y,
                                     std::size_t num_classes, const LogisticOptions &options,
                                     const LogisticFit *start) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n)
    throw Error(ErrorKind::invalid_argument, "logistic fit needs matching, non-empty rows and labels");
  if (num_classes < 2)
    throw Error(ErrorKind::invalid_argument, "logistic fit needs at least 2 classes");
  if (!(options.lambda >= 0.0))
    throw Error(ErrorKind::invalid_argument, "logistic penalty must be non-negative");
  const std::size_t p = x.front().size();
  const std::size_t k = num_classes;
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      cols[j][i] = x[i][j];
  const Problem pb{cols, y, n, p, k, options};

  LogisticFit fit;
  fit.weights.assign(k, std::vector<double>(p, 0.0));
  fit.intercepts.assign(k, 0.0);
  if (start) {
    if (start->weights.size() != k || start->intercepts.size() != k ||
        std::any_of(start->weights.begin(), start->weights.end(), [&](const auto &w) { return w.size() != p; }))
      throw Error(ErrorKind::invalid_argument, "warm start has the wrong shape");
    fit.weights = start->weights;
    fit.intercepts = start->intercepts;
  }

  std::vector<double> eta(n * k), prob(n * k);
  double objective = refresh(pb, fit, eta, prob) + penalty(pb, fit);

  std::vector<double> wt(n), resid(n), curvature(p);
  for (fit.sweeps = 0; fit.sweeps < options.max_sweeps; ++fit.sweeps) {
    double largest_step = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      // Weighted least-squares model of the loss in class c's coefficients.
      double wsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double q = prob[i * k + c];
        wt[i] = std::max(q * (1.0 - q), kMinWeight);
        resid[i] = ((y[i] == static_cast<int>(c) ? 1.0 : 0.0) - q) / wt[i];
        wsum += wt[i];
      }
      wsum *= inv_n;
      for (std::size_t j = 0; j < p; ++j) {
        double h = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          h += wt[i] * cols[j][i] * cols[j][i];
        curvature[j] = h * inv_n;
      }

      const double old_b = fit.intercepts[c];
      const std::vector<double> old_w = fit.weights[c];
      for (std::size_t inner = 0; inner < kMaxInnerSweeps; ++inner) {
        double moved = 0.0;
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          g += wt[i] * resid[i];
        const double db = g * inv_n / wsum;
        if (db != 0.0) {
          fit.intercepts[c] += db;
          for (std::size_t i = 0; i < n; ++i)
            resid[i] -= db;
          moved = std::abs(db);
        }
        for (std::size_t j = 0; j < p; ++j) {
          const double h = curvature[j];
          if (h == 0.0)
            continue;
          const double *col = cols[j].data();
          g = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            g += wt[i] * col[i] * resid[i];
          g = -g * inv_n;
          double &w = fit.weights[c][j];
          const double updated = options.penalty == Penalty::l1
                                     ? soft_threshold(h * w - g, options.lambda) / h
                                     : (h * w - g) / (h + options.lambda);
          const double delta = updated - w;
          if (delta == 0.0)
            continue;
          w = updated;
          for (std::size_t i = 0; i < n; ++i)
            resid[i] -= delta * col[i];
          moved = std::max(moved, std::abs(delta));
        }
        if (moved < options.tolerance)
          break;
      }

      // Backtrack towards the previous coefficients until the objective does not rise.
      const double new_b = fit.intercepts[c];
      const std::vector<double> new_w = fit.weights[c];
      double t = 1.0;
      double candidate = refresh(pb, fit, eta, prob) + penalty(pb, fit);
      for (int half = 0; candidate > objective && half < kMaxHalvings; ++half) {
        t *= 0.5;
        fit.intercepts[c] = old_b + t * (new_b - old_b);
        for (std::size_t j = 0; j < p; ++j)
          fit.weights[c][j] = old_w[j] + t * (new_w[j] - old_w[j]);
        candidate = refresh(pb, fit, eta, prob) + penalty(pb, fit);
      }
      if (candidate > objective) {
        fit.intercepts[c] = old_b;
        fit.weights[c] = old_w;
        refresh(pb, fit, eta, prob);
        continue;
      }
      objective = candidate;
      largest_step = std::max(largest_step, std::abs(fit.intercepts[c] - old_b));
      for (std::size_t j = 0; j < p; ++j)
        largest_step = std::max(largest_step, std::abs(fit.weights[c][j] - old_w[j]));
    }
    if (largest_step < options.tolerance) {
      ++fit.sweeps;
      break;
    }
  }
  return fit;
}

} // namespace hrv::ml
