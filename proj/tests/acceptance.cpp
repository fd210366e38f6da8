// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace sigmil;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome greedy_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 pick(seed);
    const std::size_t m = 1 + pick() % 8;
    const std::size_t k = std::min<std::size_t>(m, 1 + pick() % 3);
    const std::size_t n_bags = 2 + pick() % 5;
    auto prob = oracle::random_problem(seed * 7919 + 1, m, n_bags, 5);

    const auto std_fast = greedy_select(prob.pool, std::span<const Bag>(prob.bags), k, StandardLikelihood{});
    const auto std_slow = oracle::brute_force_greedy(
        prob.pool, prob.bags, k,
        [](std::span<const Bag> b, const StrongClassifier& sc, const WeakPool& p) { return bag_log_likelihood(b, sc, p); });
    if (std_fast != std_slow) ++mismatches;

    oracle::attach_random_significance(prob.bags, pick);
    const AlphaConfig cfg{1.0 + static_cast<double>(seed % 4), 1.0};
    const auto ext_fast = greedy_select(prob.pool, std::span<const Bag>(prob.bags), k, ExtendedLikelihood{cfg});
    const auto ext_slow = oracle::brute_force_greedy(
        prob.pool, prob.bags, k, [&](std::span<const Bag> b, const StrongClassifier& sc, const WeakPool& p) {
          return extended_log_likelihood(b, sc, p, cfg);
        });
    if (ext_fast != ext_slow) ++mismatches;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(mismatches == 0, std::to_string(mismatches) + " selections differ from brute force");
  o.require(secs < 10.0, fmt("took %.2f s", secs));
  o.detail = (o.pass ? "" : o.detail + "; ") + "200 selections (standard + extended likelihood), " + fmt("%.3f s", secs);
  return o;
}

Outcome reductions() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(kProbEpsilon, 1.0 - kProbEpsilon), rv(0.01, 1.0);
  double worst_nor = 0.0, worst_ll = 0.0;
  int select_diff = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> p(1 + t % 9);
    for (auto& v : p) v = u(rng);
    const double r = rv(rng);
    const std::vector<double> rs(p.size(), r);
    worst_nor = std::max(worst_nor, std::abs(extended_noisy_or(p, rs, r, 1.0) - noisy_or(p)));

    auto prob = oracle::random_problem(10'000 + t, 6, 2 + t % 5, 5);
    for (auto& b : prob.bags) {
      if (b.positive()) b.significance = SignificanceEstimate{std::vector<double>(b.instances.size(), 1.0), 1.0};
    }
    const StrongClassifier sc{{static_cast<std::size_t>(t % 6), static_cast<std::size_t>((t + 3) % 6)}};
    worst_ll = std::max(worst_ll, std::abs(extended_log_likelihood(prob.bags, sc, prob.pool, {1.0, 1.0}) -
                                           bag_log_likelihood(prob.bags, sc, prob.pool)));
    const std::size_t k = 1 + t % 4;
    if (select_refined(prob.pool, prob.bags, k, {1.0, 1.0}) !=
        greedy_select(prob.pool, std::span<const Bag>(prob.bags), k, StandardLikelihood{})) {
      ++select_diff;
    }
  }
  o.require(worst_nor <= 1e-12, fmt("extended Noisy-OR off by %.3g", worst_nor));
  o.require(worst_ll <= 1e-12, fmt("extended likelihood off by %.3g", worst_ll));
  o.require(select_diff == 0, std::to_string(select_diff) + " refined selections differ");
  if (o.pass) o.detail = fmt("1000 cases; max |dNOR| %.2g, max |dLL| %.2g, selections identical", worst_nor, worst_ll);
  return o;
}

Outcome significance_oracle() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> p(0.0, 1.0), prior(0.01, 0.99);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> preds(1 + t % 5);
    for (auto& v : preds) v = p(rng);
    const double pi = prior(rng);
    worst = std::max(worst, std::abs(instance_significance(preds, pi) - oracle::bayes_enumeration(preds, pi)));
  }
  o.require(worst <= 1e-12, fmt("max deviation %.3g", worst));

  // 0.9 and 0.1 are not exact complements in binary (their doubles sum to
  // 1 + 2^-54), so the correctly rounded posterior is 0.5 + 1 ulp. Exact
  // complements must give exactly 0.5.
  const std::vector<double> decimal{0.9, 0.1}, dyadic{0.75, 0.25};
  const double r_dec = instance_significance(decimal, 0.5);
  const double r_dya = instance_significance(dyadic, 0.5);
  o.require(r_dya == 0.5, fmt("(0.75,0.25) gave %.17g", r_dya));
  o.require(std::abs(r_dec - 0.5) <= std::nextafter(0.5, 1.0) - 0.5, fmt("(0.9,0.1) gave %.17g", r_dec));
  if (o.pass) {
    o.detail = fmt("1000 tuples, max deviation %.2g; (0.75,0.25) -> 0.5 exactly; (0.9,0.1) -> %.17g (1 ulp, inexact inputs)",
                   worst, r_dec);
  }
  return o;
}

Outcome integral_oracle() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> side(1, 64);
  std::uniform_real_distribution<double> px(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int w = side(rng), h = side(rng);
    GrayFrame f(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) f.set(x, y, px(rng));
    const auto ii = build_integral(f);
    for (int k = 0; k < 100; ++k) {
      Rect r;
      r.x = std::uniform_int_distribution<int>(0, w - 1)(rng);
      r.y = std::uniform_int_distribution<int>(0, h - 1)(rng);
      r.w = std::uniform_int_distribution<int>(1, w - r.x)(rng);
      r.h = std::uniform_int_distribution<int>(1, h - r.y)(rng);
      worst = std::max(worst, std::abs(rect_sum(ii, r) - oracle::naive_rect_sum(f, r)));
    }
  }
  o.require(worst <= 1e-9, fmt("max deviation %.3g", worst));
  if (o.pass) o.detail = fmt("10000 rects, max deviation %.2g", worst);
  return o;
}

Outcome weak_learner_arithmetic() {
  Outcome o;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  WeakClassifier c;
  c.seen_positive = c.seen_negative = true;  // mu = 0, sigma = 1
  const std::vector<double> ones{1.0, 1.0}, spread{1.0, 3.0};
  const auto a = update(c, ones, spread, 0.85);
  o.require(near(a.mu1, 0.15) && near(a.sigma1, 0.85), "positive blend");
  o.require(near(a.mu0, 0.30) && near(a.sigma0, 1.0), "negative blend");
  o.require(update(a, spread, ones, 1.0) == a, "rate 1 is not a no-op");

  const auto fresh = update(WeakClassifier{}, spread, std::vector<double>{0.5}, 0.85);
  o.require(near(fresh.mu1, 2.0) && near(fresh.sigma1, 1.0), "first positive batch not replaced");
  o.require(near(fresh.mu0, 0.5) && fresh.sigma0 == kSigmaFloor, "first negative batch not replaced");

  WeakClassifier unit = c;
  unit.mu1 = 1.0;
  o.require(near(log_odds(unit, 1.0), 0.5) && near(log_odds(unit, 0.5), 0.0), "log-odds closed form");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-1.0, 1.0), rate(0.0, 1.0);
  WeakClassifier w;
  double min_sigma = 1.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> pos(t % 4), neg((t + 1) % 4);
    const double base = v(rng);
    for (auto& x : pos) x = t % 3 == 0 ? base : v(rng);
    for (auto& x : neg) x = t % 2 == 0 ? base : v(rng);
    w = update(w, pos, neg, rate(rng));
    min_sigma = std::min({min_sigma, w.sigma1, w.sigma0});
  }
  o.require(min_sigma >= kSigmaFloor, fmt("sigma fell to %.3g", min_sigma));
  if (o.pass) o.detail = fmt("closed forms to 1e-9; min sigma over 1000 updates %.3g", min_sigma);
  return o;
}

Outcome lattice_geometry() {
  Outcome o;
  const FrameSize frame{320, 240};
  const BoundingBox c{140, 100, 32, 32};
  const auto pos = positive_locations(c, SampleConfig{}, frame);
  SampleConfig s2;
  s2.search_radius = 2.0;
  const auto search = search_locations(c, s2, frame);
  o.require(pos.size() == 45 && pos.size() == oracle::lattice_count(c, -1.0, 4.0, frame),
            "positives: " + std::to_string(pos.size()));
  o.require(search.size() == 9 && search.size() == oracle::lattice_count(c, -1.0, 2.0, frame),
            "search: " + std::to_string(search.size()));
  if (o.pass) o.detail = "positives 45, search(s=2) 9, both equal to frame-scan enumeration";
  return o;
}

SynthConfig synthetic(std::uint64_t seed) {
  SynthConfig sc;  // 320x240, 200 frames, 32x32 target, step 5, noise 5/255
  sc.seed = seed;
  return sc;
}

struct RunScore {
  double cle = 0.0, vor = 0.0, seconds = 0.0;
};

RunScore track_synthetic(std::uint64_t seed, const TrackerConfig& cfg) {
  const auto seq = synthesize(synthetic(seed));
  const auto t0 = std::chrono::steady_clock::now();
  const auto boxes = run(seq.frames, seq.truth.front(), cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<std::optional<BoundingBox>> truth(seq.truth.begin(), seq.truth.end());
  const auto rep = report({"synthetic", boxes, truth});
  return {rep.mean_cle, rep.mean_vor, secs};
}

Outcome end_to_end() {
  Outcome o;
  TrackerConfig cfg;  // M=150, K=15, N=3, alpha=3
  cfg.seed = 1;
  const auto r = track_synthetic(1, cfg);
  o.require(r.cle <= 5.0, fmt("mean CLE %.3f", r.cle));
  o.require(r.vor >= 0.6, fmt("mean VOR %.3f", r.vor));
  o.require(r.seconds < 60.0, fmt("%.1f s", r.seconds));
  o.detail = fmt("seed 1: mean CLE %.2f px, mean VOR %.3f, ", r.cle, r.vor) +
             fmt("%.1f s (%.1f fps)", r.seconds, 200.0 / r.seconds);
  return o;
}

Outcome bench_and_ablation() {
  Outcome o;
  // Layout: bench over a user-style directory of sequences.
  {
    ScratchDir dir("accept-bench");
    for (const char* name : {"seqA", "seqB"}) {
      cli::SynthOptions s;
      s.out = dir.path() / "root" / name;
      s.config.width = 160;
      s.config.height = 120;
      s.config.frames = 5;
      std::ostringstream sink;
      cli::cmd_synth(s, sink, sink);
    }
    cli::BenchOptions b;
    b.root = dir.path() / "root";
    b.out = dir.path() / "out";
    b.overrides = {{"num_weak", "40"}, {"num_select", "6"}};
    b.baseline = true;
    std::ostringstream out, err;
    const int code = cli::cmd_bench(b, out, err);
    o.require(code == cli::kOk, "bench exited " + std::to_string(code) + ": " + err.str());
    if (code == cli::kOk) {
      const auto text = io::read_text(dir.path() / "out" / "tables.txt");
      const auto cle_csv = io::read_text(dir.path() / "out" / "cle_table.csv");
      const auto vor_csv = io::read_text(dir.path() / "out" / "vor_table.csv");
      o.require(text.rfind("Average Center Location Error (in pixel)\n", 0) == 0, "CLE table title");
      o.require(text.find("\nAverage Overlap Rate\n") != std::string::npos, "VOR table title");
      o.require(text.find("| Seq     | Ours | MILBoost |") != std::string::npos, "header row");
      o.require(cle_csv.rfind("Seq,Ours,MILBoost\nseqA,", 0) == 0 && cle_csv.find("\nAverage,") != std::string::npos,
                "CLE csv rows");
      o.require(vor_csv.rfind("Seq,Ours,MILBoost\nseqA,", 0) == 0 && vor_csv.find("\nAverage,") != std::string::npos,
                "VOR csv rows");
    }
  }

  // Ablation: significance-guided vs standard MILBoost over 10 seeds.
  double ours = 0.0, base = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrackerConfig cfg;
    cfg.seed = seed;
    ours += track_synthetic(seed, cfg).vor;
    base += track_synthetic(seed, cli::baseline_config(cfg)).vor;
  }
  ours /= 10.0;
  base /= 10.0;
  o.require(ours >= base, fmt("mean VOR ours %.3f < baseline %.3f", ours, base));
  const std::string summary = fmt("table layout ok; 10-seed mean VOR ours %.3f vs MILBoost %.3f", ours, base);
  o.detail = o.pass ? summary : o.detail + "; " + summary;
  return o;
}

Outcome determinism() {
  Outcome o;
  ScratchDir dir("accept-det");
  cli::SynthOptions s;
  s.out = dir / "seq";
  s.config.frames = 30;
  s.config.seed = 9;
  std::ostringstream out, err;
  o.require(cli::cmd_synth(s, out, err) == cli::kOk, "synth failed");
  cli::TrackOptions t;
  t.seq = dir / "seq";
  t.gt = dir / "seq" / "groundtruth_rect.txt";
  t.overrides = {{"seed", "42"}};
  t.out = dir / "a";
  o.require(cli::cmd_track(t, out, err) == cli::kOk, "first run failed: " + err.str());
  t.out = dir / "b";
  o.require(cli::cmd_track(t, out, err) == cli::kOk, "second run failed: " + err.str());
  if (o.pass) {
    const auto a = io::read_text(dir / "a" / "boxes.csv"), b = io::read_text(dir / "b" / "boxes.csv");
    o.require(a == b, "boxes.csv differs between runs");
    if (o.pass) o.detail = "30-frame default-config runs, boxes.csv identical (" + std::to_string(a.size()) + " bytes)";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"greedy-selection oracle", greedy_oracle},
      {"reduction identities", reductions},
      {"significance oracle", significance_oracle},
      {"integral-image oracle", integral_oracle},
      {"weak-learner arithmetic", weak_learner_arithmetic},
      {"lattice geometry", lattice_geometry},
      {"synthetic end-to-end", end_to_end},
      {"bench layout and ablation", bench_and_ablation},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
