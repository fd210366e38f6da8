#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/imaging.hpp"
#include "sigmil/rng.hpp"

namespace sigmil {

struct SynthConfig {
  int width = 320;
  int height = 240;
  int target = 32;          // square side, pixels
  int checker_cell = 8;     // side of one checker square, pixels
  int dark_level = 38;      // 8-bit checker intensities; the background is 128
  int light_level = 217;
  std::size_t frames = 200;
  double noise_sigma = 5.0 / 255.0;
  int walk_step = 5;        // max per-frame displacement (Euclidean), pixels
  std::uint64_t seed = 0;
};

struct SynthSequence {
  std::vector<GrayFrame> frames;  // intensities quantized to k/255
  std::vector<BoundingBox> truth;
};

namespace detail {

inline double quantize8(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

inline int reflect(int v, int lo, int hi) {
  if (hi <= lo) return lo;
  while (v < lo || v > hi) {
    if (v < lo) v = 2 * lo - v;
    if (v > hi) v = 2 * hi - v;
  }
  return v;
}

}  // namespace detail

/// Checkerboard square on a mid-gray background doing a bounded random walk,
/// plus per-pixel Gaussian noise. Deterministic in `cfg.seed`.
inline SynthSequence synthesize(const SynthConfig& cfg) {
  if (cfg.width <= 0 || cfg.height <= 0 || cfg.target < 4 || cfg.target > cfg.width || cfg.target > cfg.height) {
    throw ConfigError("synthetic target must be at least 4 px and fit inside the frame");
  }
  if (cfg.checker_cell < 1) throw ConfigError("checker cell must be at least 1 px");
  if (cfg.walk_step < 0 || cfg.noise_sigma < 0.0) throw ConfigError("walk step and noise must be non-negative");

  constexpr double background = 128.0 / 255.0;
  const double dark = std::clamp(cfg.dark_level, 0, 255) / 255.0;
  const double light = std::clamp(cfg.light_level, 0, 255) / 255.0;

  auto walk_rng = make_stream(cfg.seed, "synth-walk");
  auto noise_rng = make_stream(cfg.seed, "synth-noise");
  std::uniform_int_distribution<int> offset(-cfg.walk_step, cfg.walk_step);
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma > 0.0 ? cfg.noise_sigma : 1.0);

  const int max_x = cfg.width - cfg.target;
  const int max_y = cfg.height - cfg.target;
  BoundingBox box{max_x / 2, max_y / 2, cfg.target, cfg.target};

  SynthSequence seq;
  seq.frames.reserve(cfg.frames);
  seq.truth.reserve(cfg.frames);
  for (std::size_t f = 0; f < cfg.frames; ++f) {
    if (f > 0 && cfg.walk_step > 0) {
      int dx = 0, dy = 0;
      do {
        dx = offset(walk_rng);
        dy = offset(walk_rng);
      } while (dx * dx + dy * dy > cfg.walk_step * cfg.walk_step);
      box.x = detail::reflect(box.x + dx, 0, max_x);
      box.y = detail::reflect(box.y + dy, 0, max_y);
    }
    std::vector<double> px(static_cast<std::size_t>(cfg.width) * cfg.height, background);
    for (int y = 0; y < cfg.target; ++y) {
      for (int x = 0; x < cfg.target; ++x) {
        const bool odd = ((x / cfg.checker_cell) + (y / cfg.checker_cell)) % 2 != 0;
        px[static_cast<std::size_t>(box.y + y) * cfg.width + box.x + x] = odd ? light : dark;
      }
    }
    for (auto& v : px) {
      if (cfg.noise_sigma > 0.0) v += noise(noise_rng);
      v = detail::quantize8(v);
    }
    seq.frames.emplace_back(cfg.width, cfg.height, std::move(px));
    seq.truth.push_back(box);
  }
  return seq;
}

}  // namespace sigmil
