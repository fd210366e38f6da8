#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using sigmil::cli::Overrides;

// Hyperparameter flags shared by `track` and `bench`; each maps to a config key.
struct HyperFlags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> num_weak, num_select, ensemble, neg_count, neg_train;
  std::optional<double> alpha_pos, search_radius, pos_radius, neg_outer, lr;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "key=value config file, JSON config, or a run manifest");
    app.add_option("--seed", seed, "global random seed");
    app.add_option("--num-weak", num_weak, "candidate weak classifiers M (default 150)");
    app.add_option("--num-select", num_select, "weak classifiers per strong classifier K (default 15)");
    app.add_option("--ensemble", ensemble, "randomized learners N for significance (default 3)");
    app.add_option("--alpha-pos", alpha_pos, "Noisy-OR exponent scale for positive bags (default 3)");
    app.add_option("--search-radius", search_radius, "detection search radius in pixels (default 25)");
    app.add_option("--pos-radius", pos_radius, "positive radius, also the negative inner radius (default 4)");
    app.add_option("--neg-outer", neg_outer, "negative outer radius in pixels (default 50)");
    app.add_option("--neg-count", neg_count, "negatives sampled per frame (default 200)");
    app.add_option("--neg-train", neg_train, "negatives used per learner update (default 50)");
    app.add_option("--lr", lr, "weak-classifier learning rate (default 0.85)");
  }

  [[nodiscard]] Overrides overrides() const {
    Overrides o;
    auto put = [&](const char* key, const auto& v) {
      if (v) {
        std::ostringstream ss;
        ss << std::setprecision(17) << *v;
        o.emplace_back(key, ss.str());
      }
    };
    put("seed", seed);
    put("num_weak", num_weak);
    put("num_select", num_select);
    put("ensemble", ensemble);
    put("alpha_pos", alpha_pos);
    put("search_radius", search_radius);
    put("pos_radius", pos_radius);
    put("neg_inner", pos_radius);
    put("neg_outer", neg_outer);
    put("neg_count", neg_count);
    put("neg_train_count", neg_train);
    put("learning_rate", lr);
    return o;
  }

  [[nodiscard]] std::optional<std::filesystem::path> config_path() const {
    if (!config) return std::nullopt;
    return std::filesystem::path(*config);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Significance-guided online multiple-instance boosting tracker"};
  app.set_version_flag("--version", sigmil::kVersion);
  app.require_subcommand(1);

  sigmil::cli::TrackOptions track;
  HyperFlags track_flags;
  std::string track_seq, track_gt, track_out;
  auto* track_cmd = app.add_subcommand("track", "track one image sequence");
  track_cmd->add_option("--seq", track_seq, "frames directory (or a sequence directory holding img/)")->required();
  track_cmd->add_option("--gt", track_gt, "ground-truth file, one x,y,w,h row per frame")->required();
  track_cmd->add_option("--out", track_out, "output directory")->required();
  track_cmd->add_option("--name", track.name, "sequence name recorded in the manifest");
  track_cmd->add_flag("--debug-significance", track.debug_significance,
                      "also write per-frame significance values to significance.csv");
  track_flags.attach(*track_cmd);

  sigmil::cli::EvalOptions eval;
  std::vector<std::string> eval_results, eval_gts;
  std::string eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "score tracker output against ground truth");
  eval_cmd->add_option("--results", eval_results, "result box file (repeatable)")->required();
  eval_cmd->add_option("--gt", eval_gts, "ground-truth file, one per --results")->required();
  eval_cmd->add_option("--name", eval.names, "sequence name, one per --results");
  eval_cmd->add_option("--method", eval.method, "column label (default Ours)");
  eval_cmd->add_option("--out", eval_out, "output directory")->required();

  sigmil::cli::SynthOptions synth;
  std::string synth_out;
  double noise_levels = 5.0;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic test sequence");
  synth_cmd->add_option("--out", synth_out, "output sequence directory")->required();
  synth_cmd->add_option("--frames", synth.config.frames, "number of frames (default 200)");
  synth_cmd->add_option("--noise", noise_levels, "Gaussian noise sigma in 8-bit gray levels (default 5)");
  synth_cmd->add_option("--step", synth.config.walk_step, "max per-frame displacement in pixels (default 5)");
  synth_cmd->add_option("--seed", synth.config.seed, "random seed");
  synth_cmd->add_option("--width", synth.config.width, "frame width (default 320)");
  synth_cmd->add_option("--height", synth.config.height, "frame height (default 240)");
  synth_cmd->add_option("--target", synth.config.target, "target side in pixels (default 32)");

  sigmil::cli::BenchOptions bench;
  HyperFlags bench_flags;
  std::string bench_root, bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "track and evaluate every sequence under a directory");
  bench_cmd->add_option("--root", bench_root, "directory of sequence directories")->required();
  bench_cmd->add_option("--out", bench_out, "output directory")->required();
  bench_cmd->add_flag("--baseline", bench.baseline, "add an unguided MILBoost column (N=1, alpha=1)");
  bench_flags.attach(*bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sigmil::cli::kInputError;
  }

  if (*track_cmd) {
    track.seq = track_seq;
    track.gt = track_gt;
    track.out = track_out;
    track.config = track_flags.config_path();
    track.overrides = track_flags.overrides();
    return sigmil::cli::cmd_track(track);
  }
  if (*eval_cmd) {
    for (const auto& r : eval_results) eval.results.emplace_back(r);
    for (const auto& g : eval_gts) eval.gts.emplace_back(g);
    eval.out = eval_out;
    return sigmil::cli::cmd_eval(eval);
  }
  if (*synth_cmd) {
    synth.out = synth_out;
    synth.config.noise_sigma = noise_levels / 255.0;
    return sigmil::cli::cmd_synth(synth);
  }
  bench.root = bench_root;
  bench.out = bench_out;
  bench.config = bench_flags.config_path();
  bench.overrides = bench_flags.overrides();
  return sigmil::cli::cmd_bench(bench);
}
