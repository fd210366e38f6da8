#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/imaging.hpp"
#include "sigmil/rng.hpp"
#include "sigmil/significance.hpp"

namespace sigmil {

/// Sampling geometry, in pixels, measured between box top-left corners.
struct SampleConfig {
  double pos_radius = 4.0;       // positives: d < pos_radius
  double neg_inner = 4.0;        // negatives: neg_inner < d < neg_outer
  double neg_outer = 50.0;
  std::size_t neg_count = 200;   // negatives drawn per frame
  std::size_t neg_train_count = 50;  // of which each learner trains on this many
  double search_radius = 25.0;   // detection: d < search_radius

  void validate() const {
    if (!(pos_radius > 0.0 && pos_radius <= neg_inner && neg_inner < neg_outer)) {
      throw ConfigError("sampling radii must satisfy 0 < pos_radius <= neg_inner < neg_outer");
    }
    if (!(search_radius > 0.0)) throw ConfigError("search radius must be positive");
    if (neg_train_count > neg_count) throw ConfigError("neg_train_count exceeds neg_count");
    if (neg_train_count < 1) throw ConfigError("neg_train_count must be at least 1");
  }

  friend bool operator==(const SampleConfig&, const SampleConfig&) = default;
};

/// In-bounds copies of `center` displaced by integer offsets with
/// inner^2 < dx^2 + dy^2 < outer^2, in row-major offset order (dy outer, dx inner).
/// A negative `inner` admits the zero offset.
inline std::vector<BoundingBox> lattice_locations(const BoundingBox& center, double inner, double outer,
                                                  FrameSize frame) {
  std::vector<BoundingBox> out;
  const int reach = static_cast<int>(std::ceil(outer));
  const double inner2 = inner < 0.0 ? -1.0 : inner * inner;
  const double outer2 = outer * outer;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const double d2 = static_cast<double>(dx * dx + dy * dy);
      if (!(d2 > inner2 && d2 < outer2)) continue;
      const BoundingBox b = center.moved_to(center.x + dx, center.y + dy);
      if (b.inside(frame)) out.push_back(b);
    }
  }
  return out;
}

inline std::vector<BoundingBox> positive_locations(const BoundingBox& center, const SampleConfig& cfg,
                                                   FrameSize frame) {
  auto out = lattice_locations(center, -1.0, cfg.pos_radius, frame);
  if (out.empty()) throw BoundsError("no in-bounds positive location around " + to_string(center));
  return out;
}

inline std::vector<BoundingBox> negative_locations(const BoundingBox& center, const SampleConfig& cfg,
                                                   FrameSize frame, Rng& rng) {
  const auto annulus = lattice_locations(center, cfg.neg_inner, cfg.neg_outer, frame);
  if (annulus.size() < cfg.neg_count) {
    throw ConfigError("negative annulus around " + to_string(center) + " has " + std::to_string(annulus.size()) +
                      " in-bounds locations, " + std::to_string(cfg.neg_count) + " requested");
  }
  std::vector<BoundingBox> out;
  out.reserve(cfg.neg_count);
  for (const auto i : sample_indices(annulus.size(), cfg.neg_count, rng)) out.push_back(annulus[i]);
  return out;
}

/// Uniform neg_train_count-subset of `negatives`. Each call consumes fresh
/// randomness, so consecutive calls give independent subsets.
template <typename T>
std::vector<T> training_negative_subsample(std::span<const T> negatives, const SampleConfig& cfg, Rng& rng) {
  std::vector<T> out;
  out.reserve(cfg.neg_train_count);
  for (const auto i : sample_indices(negatives.size(), cfg.neg_train_count, rng)) out.push_back(negatives[i]);
  return out;
}

inline std::vector<BoundingBox> search_locations(const BoundingBox& center, const SampleConfig& cfg,
                                                 FrameSize frame) {
  return lattice_locations(center, -1.0, cfg.search_radius, frame);
}

}  // namespace sigmil
