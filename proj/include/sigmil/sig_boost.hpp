#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/mil_core.hpp"

namespace sigmil {

/// Noisy-OR exponent scale per bag class. alpha acts as the largest number of
/// times an instance may be "repeated" inside its bag.
struct AlphaConfig {
  double alpha_pos = 3.0;
  double alpha_neg = 1.0;

  friend bool operator==(const AlphaConfig&, const AlphaConfig&) = default;
};

namespace detail {

inline void significance_exponents(std::span<const double> r, double r_bag, double alpha, std::vector<double>& out) {
  out.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) out[j] = alpha * r[j] / r_bag;
}

}  // namespace detail

/// 1 - prod_j (1 - p_j)^(alpha * r_j / r_bag).
inline double extended_noisy_or(std::span<const double> instance_probs, std::span<const double> r, double r_bag,
                                double alpha) {
  if (instance_probs.size() != r.size()) {
    throw DimensionError(std::to_string(instance_probs.size()) + " probabilities but " + std::to_string(r.size()) +
                         " significance values");
  }
  if (!(r_bag > 0.0)) throw InputError("bag significance must be positive");
  std::vector<double> w;
  detail::significance_exponents(r, r_bag, alpha, w);
  return -std::expm1(detail::log_complement_product(instance_probs, w.data()));
}

/// Significance-weighted bag log-likelihood
///   sum_i r_i (y_i log p_i + (1 - y_i) log(1 - p_i))
/// with p_i from the extended Noisy-OR. Positive bags must carry a
/// SignificanceEstimate; negative bags use r == 1.
struct ExtendedLikelihood {
  AlphaConfig alpha;

  double operator()(std::span<const Bag> bags, const BagScores& scores) const {
    double total = 0.0;
    std::vector<double> probs, w;
    for (std::size_t i = 0; i < bags.size(); ++i) {
      const Bag& bag = bags[i];
      probs.resize(scores[i].size());
      for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = instance_prob(scores[i][j]);

      if (!bag.positive()) {
        w.assign(probs.size(), alpha.alpha_neg);
        total += detail::bag_term(bag.label, detail::log_complement_product(probs, w.data()));
        continue;
      }
      if (!bag.significance) throw InputError("positive bag has no significance estimate");
      const auto& est = *bag.significance;
      if (est.instance.size() != probs.size()) {
        throw DimensionError("significance estimate does not match bag size");
      }
      if (est.bag == 0.0) continue;
      detail::significance_exponents(est.instance, est.bag, alpha.alpha_pos, w);
      total += est.bag * detail::bag_term(bag.label, detail::log_complement_product(probs, w.data()));
    }
    return total;
  }
};

inline double extended_log_likelihood(std::span<const Bag> bags, const StrongClassifier& sc, const WeakPool& pool,
                                      const AlphaConfig& cfg) {
  return ExtendedLikelihood{cfg}(bags, score_bags(bags, sc, pool));
}

/// The significance-guided strong classifier used for detection.
inline StrongClassifier select_refined(const WeakPool& pool, std::span<const Bag> bags, std::size_t k,
                                       const AlphaConfig& cfg) {
  for (const auto& b : bags) {
    if (b.positive() && !b.significance) throw InputError("positive bag has no significance estimate");
  }
  return greedy_select(pool, bags, k, ExtendedLikelihood{cfg});
}

}  // namespace sigmil
