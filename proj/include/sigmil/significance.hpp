#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/mil_core.hpp"
#include "sigmil/rng.hpp"
#include "sigmil/weak_learners.hpp"

namespace sigmil {

/// Randomized MILBoost learners sharing one WeakPool. Each learner saw the same
/// positive bag but its own subsample of negative bags.
struct Ensemble {
  std::vector<StrongClassifier> learners;

  [[nodiscard]] std::size_t size() const { return learners.size(); }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// Indices of `take` distinct items out of `available`, uniformly at random, in
/// ascending order.
inline std::vector<std::size_t> sample_indices(std::size_t available, std::size_t take, Rng& rng) {
  if (take > available) {
    throw ConfigError("cannot draw " + std::to_string(take) + " distinct items from " + std::to_string(available));
  }
  std::vector<std::size_t> all(available);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(take);
  std::sample(all.begin(), all.end(), std::back_inserter(out), take, rng);
  return out;
}

inline Ensemble train_ensemble(const WeakPool& pool, const Bag& positive_bag, std::span<const Bag> negative_bags,
                               std::size_t learners, std::size_t negatives_per_learner, std::size_t k, Rng& rng) {
  if (learners < 1) throw ConfigError("ensemble needs at least one learner");
  if (negatives_per_learner > negative_bags.size()) {
    throw ConfigError("each learner needs " + std::to_string(negatives_per_learner) + " negative bags, only " +
                      std::to_string(negative_bags.size()) + " available");
  }
  Ensemble ensemble;
  ensemble.learners.reserve(learners);
  std::vector<Bag> bags;
  for (std::size_t n = 0; n < learners; ++n) {
    bags.clear();
    bags.push_back(positive_bag);
    for (const auto i : sample_indices(negative_bags.size(), negatives_per_learner, rng)) {
      bags.push_back(negative_bags[i]);
    }
    ensemble.learners.push_back(greedy_select(pool, std::span<const Bag>(bags), k, StandardLikelihood{}));
  }
  return ensemble;
}

/// Posterior that an instance is positive given N learner predictions p_k and a
/// prior pi, treating learners as conditionally independent:
///
///   r = pi^(1-N) prod p_k / (pi^(1-N) prod p_k + (1-pi)^(1-N) prod (1-p_k))
///
/// Evaluated in the log domain with predictions clamped into [1e-6, 1-1e-6].
inline double instance_significance(std::span<const double> preds, double prior) {
  if (preds.empty()) throw InputError("significance needs at least one learner prediction");
  if (!(prior > 0.0 && prior < 1.0)) throw ConfigError("prior must lie in (0,1), got " + std::to_string(prior));
  const double n = static_cast<double>(preds.size());
  double log_pos = (1.0 - n) * std::log(prior);
  double log_neg = (1.0 - n) * std::log1p(-prior);
  for (const double raw : preds) {
    const double p = std::clamp(raw, kProbEpsilon, 1.0 - kProbEpsilon);
    log_pos += std::log(p);
    log_neg += std::log1p(-p);
  }
  return 1.0 / (1.0 + std::exp(log_neg - log_pos));
}

/// Significance of every instance in `bag`. Negative bags are fixed at r = 1.
inline SignificanceEstimate estimate_bag(const Ensemble& ensemble, const WeakPool& pool, const Bag& bag,
                                         double prior) {
  SignificanceEstimate est;
  est.instance.assign(bag.instances.size(), 1.0);
  est.bag = 1.0;
  if (!bag.positive()) return est;

  std::vector<double> preds(ensemble.size());
  for (std::size_t j = 0; j < bag.instances.size(); ++j) {
    for (std::size_t k = 0; k < ensemble.size(); ++k) preds[k] = predict(ensemble.learners[k], pool, bag.instances[j]);
    est.instance[j] = instance_significance(preds, prior);
  }
  est.bag = est.instance.empty() ? 1.0 : *std::max_element(est.instance.begin(), est.instance.end());
  return est;
}

}  // namespace sigmil
