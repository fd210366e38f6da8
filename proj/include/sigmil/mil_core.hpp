#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/imaging.hpp"
#include "sigmil/weak_learners.hpp"

namespace sigmil {

inline constexpr double kProbEpsilon = 1e-6;

struct Instance {
  BoundingBox location;
  std::vector<double> features;  // one value per pool feature
};

/// Per-instance significance r_j of a positive bag and the bag significance
/// r = max_j r_j. Negative bags carry none; they count as r == 1 throughout.
struct SignificanceEstimate {
  std::vector<double> instance;
  double bag = 1.0;
};

struct Bag {
  Label label = Label::negative;
  std::vector<Instance> instances;
  std::optional<SignificanceEstimate> significance;

  [[nodiscard]] bool positive() const { return label == Label::positive; }
};

/// Ordered weak-classifier indices into a shared WeakPool.
struct StrongClassifier {
  std::vector<std::size_t> selected;

  [[nodiscard]] std::size_t size() const { return selected.size(); }
  [[nodiscard]] bool empty() const { return selected.empty(); }

  friend bool operator==(const StrongClassifier&, const StrongClassifier&) = default;
};

/// Scores laid out like the bags: scores[i][j] is H(x_ij).
using BagScores = std::vector<std::vector<double>>;

inline double score(const StrongClassifier& sc, const WeakPool& pool, std::span<const double> features) {
  double s = 0.0;
  for (const auto idx : sc.selected) {
    const auto& c = pool[idx];
    s += log_odds(c, features[c.feature_id]);
  }
  return s;
}

inline double score(const StrongClassifier& sc, const WeakPool& pool, const Instance& inst) {
  return score(sc, pool, std::span<const double>(inst.features));
}

/// Sigmoid clamped into [1e-6, 1 - 1e-6].
inline double instance_prob(double h) {
  const double p = 1.0 / (1.0 + std::exp(-h));
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

inline double predict(const StrongClassifier& sc, const WeakPool& pool, const Instance& inst) {
  return instance_prob(score(sc, pool, inst));
}

namespace detail {

// log prod_j (1 - p_j)^{w_j}; w == nullptr means unit exponents.
inline double log_complement_product(std::span<const double> probs, const double* weights = nullptr) {
  double s = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    const double w = weights ? weights[j] : 1.0;
    if (w != 0.0) s += w * std::log1p(-probs[j]);
  }
  return s;
}

// y log p + (1-y) log(1-p) where log(1-p) = s.
inline double bag_term(Label label, double log_complement) {
  if (label == Label::negative) return log_complement;
  return std::log(-std::expm1(log_complement));
}

}  // namespace detail

/// 1 - prod_j (1 - p_j).
inline double noisy_or(std::span<const double> instance_probs) {
  if (instance_probs.empty()) throw InputError("noisy_or of an empty bag");
  return -std::expm1(detail::log_complement_product(instance_probs));
}

/// Standard MIL bag log-likelihood sum_i y_i log p_i + (1-y_i) log(1-p_i) with
/// Noisy-OR bag probabilities.
struct StandardLikelihood {
  double operator()(std::span<const Bag> bags, const BagScores& scores) const {
    double total = 0.0;
    std::vector<double> probs;
    for (std::size_t i = 0; i < bags.size(); ++i) {
      probs.resize(scores[i].size());
      for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = instance_prob(scores[i][j]);
      total += detail::bag_term(bags[i].label, detail::log_complement_product(probs));
    }
    return total;
  }
};

template <typename L>
concept BagLikelihood = requires(const L& l, std::span<const Bag> bags, const BagScores& s) {
  { l(bags, s) } -> std::convertible_to<double>;
};

inline BagScores score_bags(std::span<const Bag> bags, const StrongClassifier& sc, const WeakPool& pool) {
  BagScores out(bags.size());
  for (std::size_t i = 0; i < bags.size(); ++i) {
    out[i].reserve(bags[i].instances.size());
    for (const auto& inst : bags[i].instances) out[i].push_back(score(sc, pool, inst));
  }
  return out;
}

inline double bag_log_likelihood(std::span<const Bag> bags, const StrongClassifier& sc, const WeakPool& pool) {
  return StandardLikelihood{}(bags, score_bags(bags, sc, pool));
}

/// Greedy boosting: K rounds, each adding the not-yet-selected weak classifier
/// that maximizes likelihood(H + h). Ties go to the lowest index.
template <BagLikelihood Likelihood>
StrongClassifier greedy_select(const WeakPool& pool, std::span<const Bag> bags, std::size_t k,
                               const Likelihood& likelihood) {
  const std::size_t m_count = pool.size();
  if (k > m_count) {
    throw ConfigError("cannot select " + std::to_string(k) + " weak classifiers from a pool of " +
                      std::to_string(m_count));
  }
  StrongClassifier sc;
  if (k == 0) return sc;

  // Weak responses for every (candidate, instance) pair, flattened bag by bag.
  std::size_t n = 0;
  for (const auto& b : bags) n += b.instances.size();
  std::vector<double> responses(m_count * n);
  {
    std::size_t col = 0;
    for (const auto& b : bags) {
      for (const auto& inst : b.instances) {
        for (std::size_t m = 0; m < m_count; ++m) {
          responses[m * n + col] = log_odds(pool[m], inst.features[pool[m].feature_id]);
        }
        ++col;
      }
    }
  }

  BagScores base(bags.size());
  for (std::size_t i = 0; i < bags.size(); ++i) base[i].assign(bags[i].instances.size(), 0.0);
  BagScores trial = base;
  std::vector<bool> used(m_count, false);

  auto add_into = [&](BagScores& dst, const BagScores& src, std::size_t m) {
    const double* r = responses.data() + m * n;
    for (std::size_t i = 0; i < dst.size(); ++i)
      for (std::size_t j = 0; j < dst[i].size(); ++j) dst[i][j] = src[i][j] + *r++;
  };

  sc.selected.reserve(k);
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = m_count;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < m_count; ++m) {
      if (used[m]) continue;
      add_into(trial, base, m);
      const double value = likelihood(bags, trial);
      if (best == m_count || value > best_value) {
        best = m;
        best_value = value;
      }
    }
    used[best] = true;
    add_into(base, base, best);
    sc.selected.push_back(best);
  }
  return sc;
}

}  // namespace sigmil
