#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/features.hpp"
#include "sigmil/imaging.hpp"
#include "sigmil/mil_core.hpp"
#include "sigmil/rng.hpp"
#include "sigmil/sampling.hpp"
#include "sigmil/sig_boost.hpp"
#include "sigmil/significance.hpp"
#include "sigmil/weak_learners.hpp"

namespace sigmil {

struct TrackerConfig {
  std::size_t num_weak = 150;   // M, candidate pool size
  std::size_t num_select = 15;  // K, weak classifiers per strong classifier
  std::size_t ensemble = 3;     // N, randomized learners for significance
  double learning_rate = 0.85;
  AlphaConfig alpha;
  SampleConfig sample;
  double prior = 0.5;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_weak < 1) throw ConfigError("num_weak must be at least 1");
    if (num_select > num_weak) throw ConfigError("num_select exceeds num_weak");
    if (ensemble < 1) throw ConfigError("ensemble must hold at least one learner");
    if (learning_rate < 0.0 || learning_rate > 1.0) throw ConfigError("learning rate must lie in [0,1]");
    if (alpha.alpha_pos < 1.0) throw ConfigError("alpha_pos must be >= 1");
    if (!(alpha.alpha_neg > 0.0)) throw ConfigError("alpha_neg must be positive");
    if (!(prior > 0.0 && prior < 1.0)) throw ConfigError("prior must lie in (0,1)");
    sample.validate();
  }

  friend bool operator==(const TrackerConfig&, const TrackerConfig&) = default;
};

/// Everything a tracker carries between frames. Plain value; copies are
/// independent trackers.
struct TrackerState {
  TrackerConfig config;
  FeaturePool features;
  WeakPool weak;
  Ensemble ensemble;
  StrongClassifier refined;
  BoundingBox location;
  FrameSize frame_size;
  std::size_t frame_index = 0;
  Rng negative_rng;
  Rng subsample_rng;

  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

enum class TrainingStage { detected, pool_updated, ensemble_trained, significance_estimated, refined_selected };

inline const char* to_string(TrainingStage s) {
  switch (s) {
    case TrainingStage::detected: return "detected";
    case TrainingStage::pool_updated: return "pool_updated";
    case TrainingStage::ensemble_trained: return "ensemble_trained";
    case TrainingStage::significance_estimated: return "significance_estimated";
    case TrainingStage::refined_selected: return "refined_selected";
  }
  return "unknown";
}

/// Optional hooks for diagnostics; unset members are skipped.
struct TrackerObserver {
  std::function<void(std::size_t frame, TrainingStage)> on_stage;
  std::function<void(std::size_t frame, const Bag& positive_bag)> on_significance;
};

namespace detail {

inline void notify(const TrackerObserver* obs, std::size_t frame, TrainingStage s) {
  if (obs && obs->on_stage) obs->on_stage(frame, s);
}

inline Bag make_bag(Label label, std::span<const BoundingBox> locations, const FeaturePool& pool,
                    const IntegralImage& ii) {
  Bag bag;
  bag.label = label;
  bag.instances.reserve(locations.size());
  for (const auto& loc : locations) bag.instances.push_back({loc, evaluate_all(pool, ii, loc)});
  return bag;
}

// Sample bags at the current location, update the shared weak pool once,
// retrain the ensemble, estimate significance, then reselect the refined
// classifier. Stage order is fixed.
inline void train_at_location(TrackerState& st, const IntegralImage& ii, const TrackerObserver* obs) {
  const auto& cfg = st.config;
  const auto frame = st.frame_index;

  const auto pos_locs = positive_locations(st.location, cfg.sample, st.frame_size);
  const auto neg_locs = negative_locations(st.location, cfg.sample, st.frame_size, st.negative_rng);

  Bag positive = make_bag(Label::positive, pos_locs, st.features, ii);
  std::vector<Bag> negatives;
  negatives.reserve(neg_locs.size());
  for (const auto& loc : neg_locs) negatives.push_back(make_bag(Label::negative, std::span(&loc, 1), st.features, ii));

  const auto shared = training_negative_subsample(std::span<const Bag>(negatives), cfg.sample, st.subsample_rng);

  FeatureMatrix fm;
  std::vector<Label> labels;
  for (const auto& inst : positive.instances) {
    fm.append_row(inst.features);
    labels.push_back(Label::positive);
  }
  for (const auto& b : shared) {
    fm.append_row(b.instances.front().features);
    labels.push_back(Label::negative);
  }
  update_pool(st.weak, fm, labels);
  notify(obs, frame, TrainingStage::pool_updated);

  st.ensemble = train_ensemble(st.weak, positive, negatives, cfg.ensemble, cfg.sample.neg_train_count,
                               cfg.num_select, st.subsample_rng);
  notify(obs, frame, TrainingStage::ensemble_trained);

  positive.significance = estimate_bag(st.ensemble, st.weak, positive, cfg.prior);
  notify(obs, frame, TrainingStage::significance_estimated);
  if (obs && obs->on_significance) obs->on_significance(frame, positive);

  std::vector<Bag> bags;
  bags.reserve(shared.size() + 1);
  bags.push_back(std::move(positive));
  bags.insert(bags.end(), shared.begin(), shared.end());
  st.refined = select_refined(st.weak, bags, cfg.num_select, cfg.alpha);
  notify(obs, frame, TrainingStage::refined_selected);
}

}  // namespace detail

/// Builds the feature pool and runs the first training pass at `box`.
inline TrackerState init(const GrayFrame& first_frame, const BoundingBox& box, const TrackerConfig& cfg,
                         const TrackerObserver* obs = nullptr) {
  cfg.validate();
  if (first_frame.empty()) throw DimensionError("first frame is empty");
  if (!box.inside(first_frame.size())) throw BoundsError("initial box " + to_string(box) + " outside frame");

  TrackerState st;
  st.config = cfg;
  auto feature_rng = make_stream(cfg.seed, "features");
  st.features = generate_pool(cfg.num_weak, box.w, box.h, feature_rng);
  st.weak = WeakPool(cfg.num_weak, cfg.learning_rate);
  st.location = box;
  st.frame_size = first_frame.size();
  st.frame_index = 0;
  st.negative_rng = make_stream(cfg.seed, "negatives");
  st.subsample_rng = make_stream(cfg.seed, "subsamples");

  detail::train_at_location(st, build_integral(first_frame), obs);
  return st;
}

/// Raw strong-classifier score of every candidate, in candidate order.
inline std::vector<double> detection_scores(const TrackerState& st, const IntegralImage& ii,
                                            std::span<const BoundingBox> candidates) {
  std::vector<double> scores(candidates.size(), 0.0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double s = 0.0;
    for (const auto idx : st.refined.selected) {
      const auto& wc = st.weak[idx];
      s += log_odds(wc, evaluate_unchecked(st.features[wc.feature_id], ii, candidates[c].x, candidates[c].y));
    }
    scores[c] = s;
  }
  return scores;
}

/// Locates the object in `frame` and retrains there. Returns the new box.
inline BoundingBox step(TrackerState& st, const GrayFrame& frame, const TrackerObserver* obs = nullptr) {
  if (frame.size() != st.frame_size) {
    throw DimensionError("frame is " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                         ", tracker was initialized on " + std::to_string(st.frame_size.width) + "x" +
                         std::to_string(st.frame_size.height));
  }
  ++st.frame_index;
  const auto ii = build_integral(frame);
  const auto candidates = search_locations(st.location, st.config.sample, st.frame_size);
  const auto scores = detection_scores(st, ii, candidates);

  // argmax of sigmoid(H) is argmax of H; comparing raw scores keeps candidates
  // distinguishable where the clamped probability saturates.
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  st.location = candidates[best];
  detail::notify(obs, st.frame_index, TrainingStage::detected);

  detail::train_at_location(st, ii, obs);
  return st.location;
}

/// Tracks through `count` frames fetched on demand by `load(i)`. The first box
/// is `first_box` itself.
template <typename FrameLoader>
std::vector<BoundingBox> run(std::size_t count, FrameLoader&& load, const BoundingBox& first_box,
                             const TrackerConfig& cfg, const TrackerObserver* obs = nullptr) {
  if (count < 1) throw InputError("sequence has no frames");
  std::vector<BoundingBox> boxes;
  boxes.reserve(count);
  TrackerState st = init(load(std::size_t{0}), first_box, cfg, obs);
  boxes.push_back(first_box);
  for (std::size_t i = 1; i < count; ++i) boxes.push_back(step(st, load(i), obs));
  return boxes;
}

inline std::vector<BoundingBox> run(std::span<const GrayFrame> frames, const BoundingBox& first_box,
                                    const TrackerConfig& cfg, const TrackerObserver* obs = nullptr) {
  return run(frames.size(), [&](std::size_t i) -> const GrayFrame& { return frames[i]; }, first_box, cfg, obs);
}

}  // namespace sigmil
