#pragma once

// Implementations of the sigmil subcommands. Each returns a process exit code
// (0 ok, 2 input error, 3 decode error) and writes diagnostics to `err`.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sigmil/config.hpp"
#include "sigmil/errors.hpp"
#include "sigmil/evaluation.hpp"
#include "sigmil/io.hpp"
#include "sigmil/synth.hpp"
#include "sigmil/tracker.hpp"
#include "sigmil/version.hpp"

namespace sigmil::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kInputError = 2, kDecodeError = 3 };

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Defaults, then a config file (key=value text, a JSON object, or a run
/// manifest whose "config" member is used), then flag overrides.
inline TrackerConfig resolve_config(const std::optional<fs::path>& config_file, const Overrides& overrides) {
  TrackerConfig cfg;
  if (config_file) {
    const auto text = io::read_text(*config_file);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::exception& e) {
        throw InputError(config_file->string() + ": " + e.what());
      }
      cfg = config_from_json(j.contains("config") ? j.at("config") : j, cfg);
    } else {
      cfg = parse_config_text(text, cfg);
    }
  }
  for (const auto& [key, value] : overrides) set_config_value(cfg, key, value);
  cfg.validate();
  return cfg;
}

/// "seq/img/" -> "seq".
inline std::string sequence_name(fs::path p) {
  p = p.lexically_normal();
  if (!p.has_filename()) p = p.parent_path();
  if (p.filename() == "img") p = p.parent_path();
  return p.filename().string();
}

struct TrackOptions {
  fs::path seq;
  fs::path gt;
  fs::path out;
  std::optional<fs::path> config;
  Overrides overrides;
  bool debug_significance = false;
  std::string name;
};

struct TrackOutcome {
  TrackerConfig config;
  std::vector<BoundingBox> boxes;
  std::vector<std::optional<BoundingBox>> truth;  // padded to the frame count
  double seconds = 0.0;
  std::string significance_csv;
};

/// Loads a sequence and tracks it. Throws on bad input.
inline TrackOutcome track_sequence(const fs::path& seq, const fs::path& gt, const TrackerConfig& cfg,
                                   bool debug_significance = false) {
  const auto frames = io::list_frames(seq);
  auto truth = io::load_ground_truth(gt);
  truth.resize(frames.size());

  TrackOutcome out;
  out.config = cfg;
  out.truth = truth;

  std::ostringstream sig;
  TrackerObserver observer;
  if (debug_significance) {
    sig << "frame,instance,x,y,r\n";
    observer.on_significance = [&](std::size_t frame, const Bag& bag) {
      const auto& r = bag.significance->instance;
      for (std::size_t j = 0; j < r.size(); ++j) {
        sig << frame << ',' << j << ',' << bag.instances[j].location.x << ',' << bag.instances[j].location.y << ','
            << r[j] << '\n';
      }
    };
  }

  auto load = [&](std::size_t i) {
    try {
      return io::load_frame(frames[i]);
    } catch (const DecodeError& e) {
      throw DecodeError("frame " + std::to_string(i) + ": " + e.what());
    }
  };
  const auto t0 = std::chrono::steady_clock::now();
  out.boxes = run(frames.size(), load, *truth.front(), cfg, debug_significance ? &observer : nullptr);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.significance_csv = sig.str();
  return out;
}

inline nlohmann::json make_manifest(const TrackOptions& opt, const TrackOutcome& r) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : r.boxes) boxes.push_back({b.x, b.y, b.w, b.h});
  const std::string sequence = opt.name.empty() ? sequence_name(opt.seq) : opt.name;
  nlohmann::json j = {
      {"tool", "sigmil"},
      {"version", kVersion},
      {"sequence", sequence},
      {"frames_dir", opt.seq.string()},
      {"ground_truth", opt.gt.string()},
      {"seed", r.config.seed},
      {"config", to_json(r.config)},
      {"frames", r.boxes.size()},
      {"boxes", std::move(boxes)},
      {"timing", {{"total_seconds", r.seconds}, {"fps", r.seconds > 0 ? r.boxes.size() / r.seconds : 0.0}}},
  };
  try {
    const auto rep = report({sequence, r.boxes, r.truth});
    j["metrics"] = {{"mean_cle", rep.mean_cle}, {"mean_vor", rep.mean_vor}, {"skipped_frames", rep.skipped}};
  } catch (const InputError&) {
    // No usable ground truth beyond the first row; metrics omitted.
  }
  return j;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const DecodeError& e) {
    err << "decode error: " << e.what() << '\n';
    return kDecodeError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

/// Writes <out>/boxes.csv and <out>/manifest.json (+ significance.csv on request).
inline int cmd_track(const TrackOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const auto cfg = resolve_config(opt.config, opt.overrides);
    const auto r = track_sequence(opt.seq, opt.gt, cfg, opt.debug_significance);
    io::write_text(opt.out / "boxes.csv", per_frame_csv(r.boxes, r.truth));
    io::write_text(opt.out / "manifest.json", make_manifest(opt, r).dump(2) + "\n");
    if (opt.debug_significance) io::write_text(opt.out / "significance.csv", r.significance_csv);
    out << "tracked " << r.boxes.size() << " frames in " << r.seconds << " s -> " << opt.out.string() << '\n';
    return int{kOk};
  });
}

struct EvalOptions {
  std::vector<fs::path> results;
  std::vector<fs::path> gts;
  std::vector<std::string> names;
  fs::path out;
  std::string method = "Ours";
};

inline void write_tables(const fs::path& dir, const SummaryTable& cle_t, const SummaryTable& vor_t,
                         std::ostream& out) {
  io::write_text(dir / "cle_table.csv", cle_t.csv());
  io::write_text(dir / "vor_table.csv", vor_t.csv());
  const std::string text = cle_t.text() + "\n" + vor_t.text();
  io::write_text(dir / "tables.txt", text);
  out << text;
}

/// Compares result files against ground truth and writes the CLE / VOR tables.
inline int cmd_eval(const EvalOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    if (opt.results.empty()) throw InputError("no results files given");
    if (opt.results.size() != opt.gts.size()) throw InputError("need one --gt per --results");
    if (!opt.names.empty() && opt.names.size() != opt.results.size()) {
      throw InputError("need one --name per --results");
    }
    auto cle_t = cle_table({opt.method});
    auto vor_t = vor_table({opt.method});
    std::ostringstream metrics;
    metrics << "sequence,frames,evaluated,avg_cle,avg_vor\n";
    for (std::size_t i = 0; i < opt.results.size(); ++i) {
      const std::string name = opt.names.empty() ? sequence_name(opt.results[i].parent_path()) : opt.names[i];
      TrackResult tr{name, io::load_result_boxes(opt.results[i]), io::load_ground_truth(opt.gts[i])};
      const auto rep = report(tr);
      cle_t.add_row(name, {rep.mean_cle});
      vor_t.add_row(name, {rep.mean_vor});
      metrics << name << ',' << tr.boxes.size() << ',' << rep.frames.size() << ',' << rep.mean_cle << ','
              << rep.mean_vor << '\n';
      if (!rep.skipped.empty()) err << name << ": skipped " << rep.skipped.size() << " invalid ground-truth rows\n";
    }
    io::write_text(opt.out / "metrics.csv", metrics.str());
    write_tables(opt.out, cle_t, vor_t, out);
    return int{kOk};
  });
}

struct SynthOptions {
  fs::path out;
  SynthConfig config;
};

/// Writes <out>/img/0001.png ... and <out>/groundtruth_rect.txt.
inline int cmd_synth(const SynthOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    std::error_code ec;
    fs::create_directories(opt.out / "img", ec);
    if (ec || !fs::is_directory(opt.out / "img")) throw InputError("cannot create " + (opt.out / "img").string());
    const auto seq = synthesize(opt.config);
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      std::ostringstream name;
      name << std::setw(4) << std::setfill('0') << i + 1 << ".png";
      io::save_frame_png(seq.frames[i], opt.out / "img" / name.str());
    }
    io::write_text(opt.out / "groundtruth_rect.txt", io::format_ground_truth(seq.truth));
    out << "wrote " << seq.frames.size() << " frames to " << opt.out.string() << '\n';
    return int{kOk};
  });
}

struct BenchOptions {
  fs::path root;
  fs::path out;
  std::optional<fs::path> config;
  Overrides overrides;
  bool baseline = false;
};

struct SequenceSpec {
  std::string name;
  fs::path frames;
  fs::path gt;
};

/// Sequence directories under `root`: each holds frames (directly or in img/)
/// and a ground-truth file.
inline std::vector<SequenceSpec> discover_sequences(const fs::path& root) {
  if (!fs::is_directory(root)) throw InputError("benchmark root does not exist: " + root.string());
  std::vector<SequenceSpec> out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (!e.is_directory()) continue;
    for (const char* gt_name : {"groundtruth_rect.txt", "groundtruth.txt", "gt.txt"}) {
      if (fs::is_regular_file(e.path() / gt_name)) {
        out.push_back({e.path().filename().string(), e.path(), e.path() / gt_name});
        break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  if (out.empty()) throw InputError("no sequences with ground truth under " + root.string());
  return out;
}

/// The configuration of the unguided baseline: one learner, alpha = 1.
inline TrackerConfig baseline_config(TrackerConfig cfg) {
  cfg.ensemble = 1;
  cfg.alpha.alpha_pos = 1.0;
  return cfg;
}

/// track + eval over every sequence under `root`, then the aggregate tables.
inline int cmd_bench(const BenchOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const auto cfg = resolve_config(opt.config, opt.overrides);
    const auto seqs = discover_sequences(opt.root);
    std::vector<std::pair<std::string, TrackerConfig>> methods{{"Ours", cfg}};
    if (opt.baseline) methods.emplace_back("MILBoost", baseline_config(cfg));
    std::vector<std::string> names;
    for (const auto& m : methods) names.push_back(m.first);

    auto cle_t = cle_table(names);
    auto vor_t = vor_table(names);
    for (const auto& s : seqs) {
      std::vector<double> cles, vors;
      for (const auto& [method, mcfg] : methods) {
        const auto r = track_sequence(s.frames, s.gt, mcfg);
        const auto rep = report({s.name, r.boxes, r.truth});
        io::write_text(opt.out / s.name / (method + "_boxes.csv"), per_frame_csv(r.boxes, r.truth));
        cles.push_back(rep.mean_cle);
        vors.push_back(rep.mean_vor);
        err << s.name << " [" << method << "]: CLE " << rep.mean_cle << ", VOR " << rep.mean_vor << " ("
            << r.seconds << " s)\n";
      }
      cle_t.add_row(s.name, cles);
      vor_t.add_row(s.name, vors);
    }
    write_tables(opt.out, cle_t, vor_t, out);
    return int{kOk};
  });
}

}  // namespace sigmil::cli
