#pragma once

// File-level I/O: image decoding (OpenCV), ground-truth files, result CSVs.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "sigmil/errors.hpp"
#include "sigmil/imaging.hpp"

namespace sigmil::io {

namespace fs = std::filesystem;

inline GrayFrame load_frame(const fs::path& path) {
  const cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw DecodeError("cannot decode image " + path.string());
  if (img.depth() != CV_8U) throw DecodeError("unsupported bit depth in " + path.string() + " (8-bit only)");

  const int w = img.cols, h = img.rows;
  const int ch = img.channels();
  if (ch == 1) {
    std::vector<double> px(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
      const auto* row = img.ptr<std::uint8_t>(y);
      for (int x = 0; x < w; ++x) px[static_cast<std::size_t>(y) * w + x] = row[x] / 255.0;
    }
    return {w, h, std::move(px)};
  }
  if (ch == 3 || ch == 4) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
      const auto* row = img.ptr<std::uint8_t>(y);
      for (int x = 0; x < w; ++x) {
        auto* dst = &rgb[(static_cast<std::size_t>(y) * w + x) * 3];
        const auto* src = row + static_cast<std::size_t>(x) * ch;  // OpenCV stores BGR(A)
        dst[0] = src[2];
        dst[1] = src[1];
        dst[2] = src[0];
      }
    }
    return to_gray(rgb, w, h);
  }
  throw DecodeError("unsupported channel count " + std::to_string(ch) + " in " + path.string());
}

/// Writes an 8-bit grayscale PNG (intensities rounded to k/255).
inline void save_frame_png(const GrayFrame& frame, const fs::path& path) {
  cv::Mat img(frame.height(), frame.width(), CV_8UC1);
  for (int y = 0; y < frame.height(); ++y) {
    auto* row = img.ptr<std::uint8_t>(y);
    for (int x = 0; x < frame.width(); ++x) {
      row[x] = static_cast<std::uint8_t>(std::lround(frame.at(x, y) * 255.0));
    }
  }
  if (!cv::imwrite(path.string(), img)) throw InputError("cannot write " + path.string());
}

inline bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".pgm" || ext == ".ppm";
}

/// Image files of a sequence in lexicographic order. A directory holding an
/// `img/` subdirectory (the usual benchmark layout) is resolved to it.
inline std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("frames directory does not exist: " + dir.string());
  const fs::path root = fs::is_directory(dir / "img") ? dir / "img" : dir;
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_regular_file() && is_image_file(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw InputError("no image files in " + root.string());
  return out;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed writing " + path.string());
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',' || c == '\t' || c == ' ' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::optional<double> to_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<BoundingBox> box_from_fields(const std::vector<std::string>& f, std::size_t first) {
  if (f.size() < first + 4) return std::nullopt;
  double v[4];
  for (int k = 0; k < 4; ++k) {
    const auto n = to_number(f[first + k]);
    if (!n) return std::nullopt;
    v[k] = *n;
  }
  BoundingBox b{static_cast<int>(std::lround(v[0])), static_cast<int>(std::lround(v[1])),
                static_cast<int>(std::lround(v[2])), static_cast<int>(std::lround(v[3]))};
  if (b.w <= 0 || b.h <= 0) return std::nullopt;
  return b;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  while (!out.empty() && split_fields(out.back()).empty()) out.pop_back();
  return out;
}

}  // namespace detail

/// One "x,y,w,h" row per frame. Unusable rows become nullopt; the first row
/// must be valid because it initializes the tracker.
inline std::vector<std::optional<BoundingBox>> parse_ground_truth(const std::string& text) {
  std::vector<std::optional<BoundingBox>> out;
  for (const auto& line : detail::lines_of(text)) out.push_back(detail::box_from_fields(detail::split_fields(line), 0));
  if (out.empty() || !out.front()) throw InputError("ground truth has no valid first line");
  return out;
}

inline std::vector<std::optional<BoundingBox>> load_ground_truth(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw InputError("ground-truth file does not exist: " + path.string());
  try {
    return parse_ground_truth(read_text(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline std::string format_ground_truth(const std::vector<BoundingBox>& boxes) {
  std::ostringstream os;
  for (const auto& b : boxes) os << b.x << ',' << b.y << ',' << b.w << ',' << b.h << '\n';
  return os.str();
}

/// Tracker output boxes. Accepts the per-frame CSV written by `track`
/// (header "frame,x,y,w,h,...") or a plain ground-truth style file.
inline std::vector<BoundingBox> parse_result_boxes(const std::string& text) {
  auto lines = detail::lines_of(text);
  std::size_t first_col = 0;
  std::size_t start = 0;
  if (!lines.empty() && lines.front().rfind("frame", 0) == 0) {
    first_col = 1;
    start = 1;
  }
  std::vector<BoundingBox> out;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const auto b = detail::box_from_fields(detail::split_fields(lines[i]), first_col);
    if (!b) throw InputError("malformed result row " + std::to_string(i + 1));
    out.push_back(*b);
  }
  if (out.empty()) throw InputError("results file holds no boxes");
  return out;
}

inline std::vector<BoundingBox> load_result_boxes(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw InputError("results file does not exist: " + path.string());
  try {
    return parse_result_boxes(read_text(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace sigmil::io
