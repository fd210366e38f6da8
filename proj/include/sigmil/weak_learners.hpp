#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"

namespace sigmil {

enum class Label : int { negative = 0, positive = 1 };

inline constexpr double kSigmaFloor = 1e-3;
inline constexpr double kLogOddsClamp = 5.0;

/// Row-major instances x features table of cached feature values.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) {
      throw DimensionError("row of " + std::to_string(values.size()) + " values in a " + std::to_string(cols_) +
                           "-column feature matrix");
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Gaussian class-conditional model of one Haar feature; emits log-odds under
/// equal class priors.
struct WeakClassifier {
  std::size_t feature_id = 0;
  double mu1 = 0.0;
  double sigma1 = 1.0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  bool seen_positive = false;
  bool seen_negative = false;

  [[nodiscard]] bool initialized() const { return seen_positive && seen_negative; }

  friend bool operator==(const WeakClassifier&, const WeakClassifier&) = default;
};

namespace detail {

inline double log_normal_pdf_unnormalized(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -std::log(sigma) - 0.5 * z * z;
}

struct BatchMoments {
  double mean = 0.0;
  double stddev = 0.0;
};

inline BatchMoments moments(std::span<const double> v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

// Blends one class's (mu, sigma) toward a batch. The first batch a class ever
// sees replaces the initial (0, 1) outright.
inline void blend(double& mu, double& sigma, bool& seen, std::span<const double> batch, double rate) {
  if (batch.empty()) return;
  const auto m = moments(batch);
  if (!seen) {
    mu = m.mean;
    sigma = m.stddev;
    seen = true;
  } else {
    mu = rate * mu + (1.0 - rate) * m.mean;
    sigma = rate * sigma + (1.0 - rate) * m.stddev;
  }
  sigma = std::max(sigma, kSigmaFloor);
}

}  // namespace detail

/// log N(f; mu1, sigma1) - log N(f; mu0, sigma0), clamped to [-5, 5].
/// An uninitialized classifier is uninformative and returns 0.
inline double log_odds(const WeakClassifier& c, double fval) {
  if (!c.initialized()) return 0.0;
  const double lo = detail::log_normal_pdf_unnormalized(fval, c.mu1, c.sigma1) -
                    detail::log_normal_pdf_unnormalized(fval, c.mu0, c.sigma0);
  return std::clamp(lo, -kLogOddsClamp, kLogOddsClamp);
}

/// One online step: mu <- rate*mu + (1-rate)*mean(batch), sigma <- rate*sigma +
/// (1-rate)*std(batch), per class. An empty batch leaves that class untouched.
[[nodiscard]] inline WeakClassifier update(WeakClassifier c, std::span<const double> positives,
                                           std::span<const double> negatives, double rate) {
  detail::blend(c.mu1, c.sigma1, c.seen_positive, positives, rate);
  detail::blend(c.mu0, c.sigma0, c.seen_negative, negatives, rate);
  return c;
}

/// Candidate weak classifiers, one per pool feature, sharing a learning rate.
class WeakPool {
 public:
  WeakPool() = default;

  WeakPool(std::size_t count, double learning_rate) : learning_rate_(learning_rate), classifiers_(count) {
    if (learning_rate < 0.0 || learning_rate > 1.0) {
      throw ConfigError("learning rate must lie in [0,1], got " + std::to_string(learning_rate));
    }
    for (std::size_t i = 0; i < count; ++i) classifiers_[i].feature_id = i;
  }

  [[nodiscard]] std::size_t size() const { return classifiers_.size(); }
  [[nodiscard]] double learning_rate() const { return learning_rate_; }
  [[nodiscard]] const WeakClassifier& operator[](std::size_t i) const { return classifiers_[i]; }
  [[nodiscard]] WeakClassifier& operator[](std::size_t i) { return classifiers_[i]; }
  [[nodiscard]] std::span<const WeakClassifier> classifiers() const { return classifiers_; }

  friend bool operator==(const WeakPool&, const WeakPool&) = default;

 private:
  double learning_rate_ = 0.85;
  std::vector<WeakClassifier> classifiers_;
};

/// Updates every classifier once from its own feature column.
inline void update_pool(WeakPool& pool, const FeatureMatrix& features, std::span<const Label> labels) {
  if (features.rows() == 0 && labels.empty()) return;
  if (features.cols() != pool.size()) {
    throw DimensionError("feature matrix has " + std::to_string(features.cols()) + " columns, pool has " +
                         std::to_string(pool.size()) + " classifiers");
  }
  if (labels.size() != features.rows()) {
    throw DimensionError(std::to_string(labels.size()) + " labels for " + std::to_string(features.rows()) +
                         " instances");
  }
  std::vector<double> pos, neg;
  pos.reserve(labels.size());
  neg.reserve(labels.size());
  for (std::size_t m = 0; m < pool.size(); ++m) {
    pos.clear();
    neg.clear();
    for (std::size_t r = 0; r < features.rows(); ++r) {
      (labels[r] == Label::positive ? pos : neg).push_back(features(r, m));
    }
    pool[m] = update(pool[m], pos, neg, pool.learning_rate());
  }
}

}  // namespace sigmil
