#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sigmil/errors.hpp"
#include "sigmil/imaging.hpp"

namespace sigmil {

/// Center location error in pixels.
inline double cle(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

/// Intersection over union of the two boxes' pixel areas.
inline double vor(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = static_cast<double>(a.w) * a.h + static_cast<double>(b.w) * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

struct TrackResult {
  std::string name;
  std::vector<BoundingBox> boxes;
  std::vector<std::optional<BoundingBox>> truth;  // nullopt: unusable ground-truth row
};

struct MetricReport {
  std::vector<std::size_t> frames;  // frames that had usable ground truth
  std::vector<double> cle;
  std::vector<double> vor;
  std::vector<std::size_t> skipped;
  double mean_cle = 0.0;
  double mean_vor = 0.0;
};

inline MetricReport report(const TrackResult& result) {
  if (result.boxes.size() != result.truth.size()) {
    throw InputError("sequence '" + result.name + "': " + std::to_string(result.boxes.size()) +
                     " result rows vs " + std::to_string(result.truth.size()) + " ground-truth rows");
  }
  if (result.boxes.empty()) throw InputError("sequence '" + result.name + "' has no frames");
  MetricReport r;
  for (std::size_t i = 0; i < result.boxes.size(); ++i) {
    if (!result.truth[i]) {
      r.skipped.push_back(i);
      continue;
    }
    r.frames.push_back(i);
    r.cle.push_back(cle(result.boxes[i], *result.truth[i]));
    r.vor.push_back(vor(result.boxes[i], *result.truth[i]));
  }
  if (r.frames.empty()) throw InputError("sequence '" + result.name + "' has no usable ground-truth rows");
  double sc = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < r.cle.size(); ++i) {
    sc += r.cle[i];
    sv += r.vor[i];
  }
  r.mean_cle = sc / static_cast<double>(r.cle.size());
  r.mean_vor = sv / static_cast<double>(r.vor.size());
  return r;
}

/// Per-frame CSV: frame,x,y,w,h,cle,vor. Metric cells stay empty where there is
/// no ground truth.
inline std::string per_frame_csv(const std::vector<BoundingBox>& boxes,
                                 const std::vector<std::optional<BoundingBox>>& truth = {}) {
  std::ostringstream os;
  os << "frame,x,y,w,h,cle,vor\n";
  os << std::fixed;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    os << i << ',' << b.x << ',' << b.y << ',' << b.w << ',' << b.h << ',';
    if (i < truth.size() && truth[i]) {
      os << std::setprecision(4) << cle(b, *truth[i]) << ',' << std::setprecision(4) << vor(b, *truth[i]);
    } else {
      os << ',';
    }
    os << '\n';
  }
  return os.str();
}

/// Sequence-by-method table with a trailing Average row.
struct SummaryTable {
  std::string title;
  int precision = 1;
  std::vector<std::string> methods;
  std::vector<std::string> sequences;
  std::vector<std::vector<double>> values;  // values[sequence][method]

  void add_row(std::string sequence, std::vector<double> row) {
    if (row.size() != methods.size()) throw InputError("table row width does not match method count");
    sequences.push_back(std::move(sequence));
    values.push_back(std::move(row));
  }

  [[nodiscard]] std::vector<double> averages() const {
    std::vector<double> avg(methods.size(), 0.0);
    if (values.empty()) return avg;
    for (const auto& row : values)
      for (std::size_t m = 0; m < row.size(); ++m) avg[m] += row[m];
    for (auto& a : avg) a /= static_cast<double>(values.size());
    return avg;
  }

  [[nodiscard]] std::string csv() const {
    std::ostringstream os;
    os << "Seq";
    for (const auto& m : methods) os << ',' << m;
    os << '\n' << std::fixed << std::setprecision(precision);
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      os << sequences[s];
      for (const double v : values[s]) os << ',' << v;
      os << '\n';
    }
    os << "Average";
    for (const double v : averages()) os << ',' << v;
    os << '\n';
    return os.str();
  }

  /// Aligned text rendering: title, header, one row per sequence, a rule, then
  /// the Average row.
  [[nodiscard]] std::string text() const {
    auto fmt = [&](double v) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(precision) << v;
      return os.str();
    };
    std::size_t name_w = std::string("Average").size();
    for (const auto& s : sequences) name_w = std::max(name_w, s.size());
    std::vector<std::size_t> col_w(methods.size());
    const auto avg = averages();
    for (std::size_t m = 0; m < methods.size(); ++m) {
      col_w[m] = std::max(methods[m].size(), fmt(avg[m]).size());
      for (const auto& row : values) col_w[m] = std::max(col_w[m], fmt(row[m]).size());
    }
    std::ostringstream os;
    auto rule = [&] {
      os << '+' << std::string(name_w + 2, '-');
      for (const auto w : col_w) os << '+' << std::string(w + 2, '-');
      os << "+\n";
    };
    auto line = [&](const std::string& name, const std::vector<std::string>& cells) {
      os << "| " << std::left << std::setw(static_cast<int>(name_w)) << name << ' ';
      for (std::size_t m = 0; m < cells.size(); ++m)
        os << "| " << std::right << std::setw(static_cast<int>(col_w[m])) << cells[m] << ' ';
      os << "|\n";
    };
    os << title << '\n';
    rule();
    line("Seq", methods);
    rule();
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      std::vector<std::string> cells;
      for (const double v : values[s]) cells.push_back(fmt(v));
      line(sequences[s], cells);
    }
    rule();
    std::vector<std::string> cells;
    for (const double v : avg) cells.push_back(fmt(v));
    line("Average", cells);
    rule();
    return os.str();
  }
};

inline SummaryTable cle_table(std::vector<std::string> methods) {
  return {"Average Center Location Error (in pixel)", 1, std::move(methods), {}, {}};
}

inline SummaryTable vor_table(std::vector<std::string> methods) {
  return {"Average Overlap Rate", 2, std::move(methods), {}, {}};
}

}  // namespace sigmil
