#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/imaging.hpp"
#include "sigmil/rng.hpp"

namespace sigmil {

struct HaarPart {
  Rect rect;  // patch-relative
  double weight = 0.0;

  friend bool operator==(const HaarPart&, const HaarPart&) = default;
};

/// Weighted sum of 2-4 rectangle sums over a patch.
struct HaarFeature {
  std::size_t id = 0;
  std::vector<HaarPart> parts;

  /// Smallest patch that contains every part.
  [[nodiscard]] FrameSize extent() const {
    FrameSize e{0, 0};
    for (const auto& p : parts) {
      e.width = std::max(e.width, p.rect.x + p.rect.w);
      e.height = std::max(e.height, p.rect.y + p.rect.h);
    }
    return e;
  }

  friend bool operator==(const HaarFeature&, const HaarFeature&) = default;
};

struct FeaturePool {
  std::vector<HaarFeature> features;
  int patch_w = 0;
  int patch_h = 0;

  [[nodiscard]] std::size_t size() const { return features.size(); }
  [[nodiscard]] const HaarFeature& operator[](std::size_t i) const { return features[i]; }

  friend bool operator==(const FeaturePool&, const FeaturePool&) = default;
};

inline constexpr int kMinPatchSide = 4;

/// Draws `count` random features for a patch_w x patch_h patch. Each feature has
/// 2-4 parts; part weights are uniform in [-1,1] divided by (parts x area), so a
/// feature value on a [0,1] frame lies in [-1,1] whatever the rectangle sizes.
inline FeaturePool generate_pool(std::size_t count, int patch_w, int patch_h, Rng& rng) {
  if (count < 1) throw ConfigError("feature pool needs at least one feature");
  if (patch_w < kMinPatchSide || patch_h < kMinPatchSide) {
    throw ConfigError("patch " + std::to_string(patch_w) + "x" + std::to_string(patch_h) +
                      " is smaller than the 4x4 minimum");
  }
  using IntDist = std::uniform_int_distribution<int>;
  std::uniform_real_distribution<double> weight_dist(-1.0, 1.0);

  FeaturePool pool;
  pool.patch_w = patch_w;
  pool.patch_h = patch_h;
  pool.features.reserve(count);
  for (std::size_t id = 0; id < count; ++id) {
    HaarFeature f;
    f.id = id;
    const int n_parts = IntDist(2, 4)(rng);
    for (int k = 0; k < n_parts; ++k) {
      Rect r;
      r.x = IntDist(0, patch_w - 2)(rng);
      r.y = IntDist(0, patch_h - 2)(rng);
      r.w = IntDist(2, patch_w - r.x)(rng);
      r.h = IntDist(2, patch_h - r.y)(rng);
      double w = 0.0;
      while (w == 0.0) w = weight_dist(rng);
      f.parts.push_back({r, w / (n_parts * r.area())});
    }
    pool.features.push_back(std::move(f));
  }
  return pool;
}

/// Feature value without any bounds checks.
inline double evaluate_unchecked(const HaarFeature& f, const IntegralImage& ii, int x0, int y0) {
  double v = 0.0;
  for (const auto& p : f.parts) v += p.weight * ii.sum_unchecked(p.rect.translated(x0, y0));
  return v;
}

inline double evaluate(const HaarFeature& f, const IntegralImage& ii, const BoundingBox& at) {
  if (!at.inside(ii.size())) {
    throw BoundsError("patch " + to_string(at) + " outside " + std::to_string(ii.width()) + "x" +
                      std::to_string(ii.height()) + " frame");
  }
  const auto e = f.extent();
  if (e.width > at.w || e.height > at.h) {
    throw BoundsError("feature " + std::to_string(f.id) + " does not fit patch " + to_string(at));
  }
  return evaluate_unchecked(f, ii, at.x, at.y);
}

/// All pool features at one patch, in pool order.
inline std::vector<double> evaluate_all(const FeaturePool& pool, const IntegralImage& ii, const BoundingBox& at) {
  if (!at.inside(ii.size())) throw BoundsError("patch " + to_string(at) + " outside frame");
  if (at.w < pool.patch_w || at.h < pool.patch_h) {
    throw BoundsError("patch " + to_string(at) + " smaller than pool patch size");
  }
  std::vector<double> out(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) out[i] = evaluate_unchecked(pool[i], ii, at.x, at.y);
  return out;
}

}  // namespace sigmil
