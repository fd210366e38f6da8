#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"

namespace sigmil {

struct FrameSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

/// Axis-aligned rectangle, top-left corner plus extent, in pixels.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  [[nodiscard]] int area() const { return w * h; }
  [[nodiscard]] bool inside(FrameSize size) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= size.width && y + h <= size.height;
  }
  [[nodiscard]] Rect translated(int dx, int dy) const { return {x + dx, y + dy, w, h}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Object box. Same layout as Rect; kept distinct so patch-relative rects and
/// frame-absolute object boxes do not mix silently.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  [[nodiscard]] Rect rect() const { return {x, y, w, h}; }
  [[nodiscard]] bool inside(FrameSize size) const { return rect().inside(size); }
  [[nodiscard]] double center_x() const { return x + 0.5 * w; }
  [[nodiscard]] double center_y() const { return y + 0.5 * h; }
  [[nodiscard]] BoundingBox moved_to(int nx, int ny) const { return {nx, ny, w, h}; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline std::string to_string(const Rect& r) {
  return "(" + std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
         std::to_string(r.h) + ")";
}
inline std::string to_string(const BoundingBox& b) { return to_string(b.rect()); }

/// Grayscale frame, row-major, intensities in [0,1].
class GrayFrame {
 public:
  GrayFrame() = default;

  GrayFrame(int width, int height, double fill = 0.0) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw DimensionError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), clamp01(fill));
  }

  GrayFrame(int width, int height, std::vector<double> data) : GrayFrame(width, height) {
    if (data.size() != data_.size()) {
      throw DimensionError("frame data length " + std::to_string(data.size()) + " != " +
                           std::to_string(width) + "x" + std::to_string(height));
    }
    std::transform(data.begin(), data.end(), data_.begin(), clamp01);
  }

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] FrameSize size() const { return {width_, height_}; }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] double at(int x, int y) const { return data_[index(x, y)]; }
  void set(int x, int y, double v) { data_[index(x, y)] = clamp01(v); }

  [[nodiscard]] std::span<const double> pixels() const { return data_; }

  /// Copy of the rectangle `r`; throws BoundsError when it leaves the frame.
  [[nodiscard]] GrayFrame crop(const Rect& r) const {
    if (!r.inside(size())) throw BoundsError("crop " + to_string(r) + " outside frame");
    GrayFrame out(r.w, r.h);
    for (int y = 0; y < r.h; ++y)
      for (int x = 0; x < r.w; ++x) out.data_[out.index(x, y)] = at(r.x + x, r.y + y);
    return out;
  }

  friend bool operator==(const GrayFrame&, const GrayFrame&) = default;

 private:
  static double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
  [[nodiscard]] std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// ITU-R 601 luma of interleaved 8-bit RGB, scaled to [0,1].
inline GrayFrame to_gray(std::span<const std::uint8_t> rgb, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("zero-sized image " + std::to_string(width) + "x" + std::to_string(height));
  }
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (rgb.size() != 3 * n) {
    throw DimensionError("RGB buffer holds " + std::to_string(rgb.size()) + " bytes, expected " +
                         std::to_string(3 * n));
  }
  std::vector<double> gray(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
    gray[i] = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
  }
  return {width, height, std::move(gray)};
}

/// Summed-area table with a zero top row and left column:
/// S(x,y) = sum of pixels (i,j) with i < x and j < y.
class IntegralImage {
 public:
  IntegralImage() = default;

  explicit IntegralImage(const GrayFrame& frame)
      : width_(frame.width()), height_(frame.height()),
        sums_(static_cast<std::size_t>(width_ + 1) * static_cast<std::size_t>(height_ + 1), 0.0) {
    const auto px = frame.pixels();
    for (int y = 0; y < height_; ++y) {
      double row = 0.0;
      for (int x = 0; x < width_; ++x) {
        row += px[static_cast<std::size_t>(y) * width_ + x];
        sums_[idx(x + 1, y + 1)] = sums_[idx(x + 1, y)] + row;
      }
    }
  }

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] FrameSize size() const { return {width_, height_}; }

  /// S(x,y) for 0 <= x <= width, 0 <= y <= height.
  [[nodiscard]] double cumulative(int x, int y) const { return sums_[idx(x, y)]; }

  /// Rectangle sum without bounds checking; callers validate placement once per patch.
  [[nodiscard]] double sum_unchecked(const Rect& r) const {
    return sums_[idx(r.x + r.w, r.y + r.h)] - sums_[idx(r.x, r.y + r.h)] - sums_[idx(r.x + r.w, r.y)] +
           sums_[idx(r.x, r.y)];
  }

 private:
  [[nodiscard]] std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_ + 1) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> sums_;
};

inline IntegralImage build_integral(const GrayFrame& frame) { return IntegralImage(frame); }

inline double rect_sum(const IntegralImage& ii, const Rect& r) {
  if (!r.inside(ii.size())) {
    throw BoundsError("rect " + to_string(r) + " outside " + std::to_string(ii.width()) + "x" +
                      std::to_string(ii.height()) + " integral image");
  }
  return ii.sum_unchecked(r);
}

}  // namespace sigmil
