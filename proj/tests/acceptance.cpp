// Acceptance gate. Prints one PASS/FAIL line per criterion followed by the
// measured values. Usage: acceptance [criterion...]; no arguments runs all.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "novelty/depth_analysis.hpp"
#include "novelty/errors.hpp"
#include "novelty/forest.hpp"
#include "novelty/model_io.hpp"
#include "novelty/reference_data.hpp"

using namespace novelty;

namespace {

constexpr double kExpectationTol = 1e-6;
constexpr double kMassTol = 1e-8;
constexpr double kClosedFormTol = 1e-12;
constexpr double kRoundedTol = 5e-3;
constexpr double kRationalTol = 1e-10;
constexpr double kNormTol = 1e-12;
constexpr double kSigmas = 3.0;
constexpr std::size_t kMcTrials = 100000;
constexpr std::uint64_t kMcSeed = 20240601;
constexpr std::size_t kForestTrees = 100;
constexpr std::uint64_t kForestSeed = 1;

struct Report {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { lines.push_back("note " + what); }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

std::string name(const DataPoint& p) { return to_string(p); }

Report criterion_1() {
  Report r;
  const auto s = reference::sample();
  const double reference_values[] = {3.32616229, 4.26063731, 4.34883099,
                              3.95906409, 4.87576598, 3.76796497};
  const auto pts = reference::table_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = exact_original(s, pts[i]).expected;
    r.check(std::abs(e - reference_values[i]) <= kExpectationTol,
            name(pts[i]) + fmt(" E=%.10f want %.8f", e, reference_values[i]));
  }
  // The reference novelty row is reproduced by the tabulated label with
  // gap-midpoint routing; the alternatives are printed for comparison.
  const DataPoint tab = reference::tabulated_novelty_point();
  const double e = exact_original(s, tab, kDefaultTruncation,
                                  NoveltyRouting::kGapMidpoint).expected;
  r.check(std::abs(e - 4.27789495) <= kExpectationTol,
          name(tab) + fmt(" gap-midpoint E=%.10f want %.8f", e, 4.27789495));
  r.note(name(tab) + fmt(" exact routing E=%.10f", exact_original(s, tab).expected));
  r.note(name(reference::novelty_point()) +
         fmt(" E=%.10f", exact_original(s, reference::novelty_point()).expected));
  return r;
}

Report criterion_2() {
  Report r;
  const auto s = reference::sample();
  struct Entry { DataPoint p; std::size_t depth; double mass; NoveltyRouting routing; };
  const std::vector<Entry> entries = {
      {{25, 100}, 1, 5.5555555556e-02, NoveltyRouting::kExact},
      {{20, 90}, 2, 3.5539215686e-02, NoveltyRouting::kExact},
      {{30, 90}, 2, 1.3368055556e-02, NoveltyRouting::kExact},
      {{35, 85}, 4, 3.2462216793e-01, NoveltyRouting::kExact},
      {{25, 85}, 3, 2.4722562636e-02, NoveltyRouting::kExact},
      {{15, 85}, 1, 2.7777777778e-02, NoveltyRouting::kExact},
      {{20, 25}, 2, 3.5693536674e-02, NoveltyRouting::kGapMidpoint},
  };
  for (const Entry& e : entries) {
    const double m = exact_original(s, e.p, kDefaultTruncation, e.routing).at(e.depth);
    r.check(std::abs(m - e.mass) <= kMassTol,
            name(e.p) + fmt(" mass(%.0f)=%.10e want %.10e", double(e.depth), m, e.mass));
  }
  return r;
}

struct HstTarget {
  DataPoint p;
  double value;
  double tol;
};

// Reference HST expectations, in table order.
std::vector<HstTarget> hst_targets() {
  return {{{25, 100}, 6, kClosedFormTol},   {{20, 90}, 6.82, kRoundedTol},
          {{30, 90}, 7.82, kRoundedTol},    {{35, 85}, 8, kClosedFormTol},
          {{25, 85}, 9.734, kRoundedTol},   {{15, 85}, 6.82, kRoundedTol},
          {{25, 20}, 3, kClosedFormTol}};
}

bool hst_expectations(const Hyperrectangle& root, Report* r) {
  const auto s = reference::sample();
  bool all = true;
  for (const HstTarget& t : hst_targets()) {
    const double e = exact_hst(s, root, t.p).expected;
    const bool ok = std::abs(e - t.value) <= t.tol;
    all = all && ok;
    if (r) r->check(ok, name(t.p) + fmt(" E=%.10f want %g (tol %g)", e, t.value, t.tol));
  }
  return all;
}

Report criterion_3() {
  Report r;
  const Hyperrectangle root = reference::example_root_rect();
  r.note("root " + to_string(root));
  hst_expectations(root, &r);
  const Hyperrectangle alt = reference::analysis_root_rect();
  r.note("root " + to_string(alt) + " reproduces every value: " +
         (hst_expectations(alt, nullptr) ? "yes" : "no"));
  return r;
}

struct MassTarget {
  DataPoint p;
  std::size_t depth;
  double mass;
};

bool hst_masses(const Hyperrectangle& root, Report* r) {
  const auto s = reference::sample();
  const std::vector<MassTarget> targets = {
      {{25, 100}, 3, 1.0 / 8}, {{20, 90}, 7, 41.0 / 128}, {{25, 85}, 8, 7.0 / 32},
      {{25, 85}, 9, 7.0 / 16}, {{25, 20}, 2, 1.0 / 2}};
  bool all = true;
  for (const MassTarget& t : targets) {
    const double m = exact_hst(s, root, t.p).at(t.depth);
    const bool ok = std::abs(m - t.mass) <= kRationalTol;
    all = all && ok;
    if (r) {
      r->check(ok, name(t.p) + fmt(" mass(%.0f)=%.12f want %.12f", double(t.depth), m, t.mass));
    }
  }
  return all;
}

Report criterion_4() {
  Report r;
  const Hyperrectangle root = reference::example_root_rect();
  r.note("root " + to_string(root));
  hst_masses(root, &r);
  const Hyperrectangle alt = reference::analysis_root_rect();
  r.note("root " + to_string(alt) + " reproduces every value: " +
         (hst_masses(alt, nullptr) ? "yes" : "no"));
  return r;
}

Report criterion_5() {
  Report r;
  const auto s = reference::sample();
  const auto script = reference::trace_script();
  const auto steps = trace_path(s, DataPoint{25, 85}, script);
  const double want[] = {1.0 / 18, 1.0 / 32, 1.0 / 36, 1.0 / 15, 11.0 / 30, 1.0 / 2, 1.0};
  r.check(steps.size() == 7, "seven steps");
  for (std::size_t i = 0; i < steps.size() && i < 7; ++i) {
    r.check(std::abs(steps[i].probability - want[i]) <= kRationalTol,
            fmt("step %.0f p=%.12f want %.12f", double(i + 1), steps[i].probability, want[i]));
  }
  return r;
}

Report criterion_6() {
  Report r;
  const auto s = reference::sample();
  auto points = s;
  points.push_back(reference::novelty_point());
  for (Algorithm algo : {Algorithm::kOriginal, Algorithm::kHst}) {
    MonteCarloOptions opts;
    opts.algorithm = algo;
    opts.trials = kMcTrials;
    opts.threads = 0;
    if (algo == Algorithm::kHst) opts.root_rect = reference::example_root_rect();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const DataPoint& p = points[i];
      opts.seed = derive_seed(kMcSeed, i);
      const double exact = algo == Algorithm::kOriginal
                               ? exact_original(s, p).expected
                               : exact_hst(s, *opts.root_rect, p).expected;
      const MonteCarloResult mc = monte_carlo(s, p, opts);
      const double se = mc.stderr_mean.value_or(0.0);
      const double z = se > 0 ? (mc.mean - exact) / se : 0.0;
      r.check(std::abs(mc.mean - exact) <= kSigmas * se,
              to_string(algo) + " " + name(p) +
                  fmt(" mc=%.5f exact=%.5f z=%+.2f", mc.mean, exact, z));
    }
  }
  return r;
}

Report criterion_7() {
  Report r;
  const auto s = reference::sample();
  const DataPoint regular{105, 20};
  const DataPoint novel = reference::novelty_point();

  auto osrc = reference::original_example_source();
  const OriginalTree otree = build_original_tree(s, *osrc);
  const EvalResult o1 = evaluate_original(otree, regular);
  const EvalResult o2 = evaluate_original(otree, novel);
  r.check(o1.depth == 2, fmt("original [105,20] depth %.0f want 2", double(o1.depth)));
  r.check(o2.depth == 5, fmt("original [25,20] depth %.0f want 5", double(o2.depth)));
  r.check(o2.first_violation_depth.has_value(),
          "original [25,20] containment violation " +
              (o2.first_violation_depth ? "at path index " + std::to_string(*o2.first_violation_depth)
                                        : std::string("missing")));
  r.check(!o1.first_violation_depth, "original [105,20] contained along its path");

  auto hsrc = reference::hst_example_source();
  const HalfSpaceTree htree = build_hst(s, reference::example_root_rect(), *hsrc);
  const EvalResult h1 = evaluate_hst(htree, regular);
  const EvalResult h2 = evaluate_hst(htree, novel);
  r.check(h1.depth == 4, fmt("hst [105,20] depth %.0f want 4", double(h1.depth)));
  r.check(h2.depth == 2, fmt("hst [25,20] depth %.0f want 2", double(h2.depth)));
  bool contained = !h1.first_violation_depth && !h2.first_violation_depth;
  for (const EvalResult* e : {&h1, &h2}) {
    for (const Hyperrectangle& cell : e->path) {
      contained = contained && cell.contains(e == &h1 ? regular : novel);
    }
  }
  r.check(contained, "hst evaluations never leave their cells");
  return r;
}

Report criterion_8() {
  Report r;
  const auto s = reference::sample();
  ForestConfig cfg;
  cfg.algorithm = Algorithm::kHst;
  cfg.n_trees = kForestTrees;
  cfg.seed = kForestSeed;
  cfg.root_rect_policy = ExplicitRoot{reference::example_root_rect()};
  const Forest f = fit(cfg, s, 0);
  const double novel = score(f, std::vector{reference::novelty_point()}).front().mean_depth;
  double lowest = INFINITY;
  for (const Score& sc : score(f, s)) lowest = std::min(lowest, sc.mean_depth);
  r.check(novel < lowest, fmt("novelty mean %.3f < min training mean %.3f", novel, lowest));
  return r;
}

Report criterion_9() {
  Report r;
  std::mt19937_64 gen(9);
  auto random_sample = [&](std::size_t n, std::size_t dims) {
    std::uniform_int_distribution<int> c(0, 12);
    std::vector<DataPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(dims);
      for (double& x : v) x = c(gen);
      out.emplace_back(std::move(v));
    }
    return out;
  };

  // Original: every training point lies in every rect on its path.
  bool original_ok = true;
  for (int round = 0; round < 200; ++round) {
    const auto s = random_sample(2 + round % 30, 1 + round % 4);
    SeededSource rng(round);
    const OriginalTree tree = build_original_tree(s, rng);
    for (const DataPoint& p : s) {
      for (const Hyperrectangle& cell : evaluate_original(tree, p).path) {
        original_ok = original_ok && cell.contains(p);
      }
    }
  }
  r.check(original_ok, "original: training points contained along their paths");

  // HST: arbitrary points stay inside every cell, leaves tile the root.
  bool path_ok = true, partition_ok = true;
  for (int round = 0; round < 100; ++round) {
    const auto s = random_sample(2 + round % 20, 1 + round % 3);
    const Hyperrectangle root = default_root_rect(s, 0.1);
    SeededSource rng(round);
    const HalfSpaceTree tree = build_hst(s, root, rng);
    double leaf_volume = 0.0;
    std::function<void(const HstNode&)> walk = [&](const HstNode& n) {
      if (n.is_leaf()) {
        double v = 1.0;
        for (const Interval& iv : n.rect.intervals()) v *= iv.length();
        leaf_volume += v;
        return;
      }
      partition_ok = partition_ok && n.left->rect[*n.split_dim].hi == n.right->rect[*n.split_dim].lo;
      walk(*n.left);
      walk(*n.right);
    };
    walk(tree.root());
    double root_volume = 1.0;
    for (const Interval& iv : root.intervals()) root_volume *= iv.length();
    partition_ok = partition_ok && std::abs(leaf_volume - root_volume) <= 1e-9 * root_volume;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> c;
      for (const Interval& iv : root.intervals()) c.push_back(iv.lo + u(gen) * iv.length() * 0.999);
      const DataPoint q(std::move(c));
      for (const Hyperrectangle& cell : evaluate_hst(tree, q).path) {
        path_ok = path_ok && cell.contains(q);
      }
    }
  }
  r.check(path_ok, "hst: every path cell contains the point");
  r.check(partition_ok, "hst: leaves partition the root");

  // Distributions sum to one.
  const auto s = reference::sample();
  double worst = 0.0;
  auto pts = s;
  pts.push_back(reference::novelty_point());
  pts.push_back(reference::tabulated_novelty_point());
  for (const DataPoint& p : pts) {
    worst = std::max(worst, std::abs(exact_original(s, p).total() - 1.0));
    worst = std::max(worst, std::abs(exact_hst(s, reference::example_root_rect(), p).total() - 1.0));
    worst = std::max(worst, std::abs(exact_hst(s, reference::analysis_root_rect(), p).total() - 1.0));
  }
  r.check(worst <= kNormTol, fmt("distributions sum to 1 (worst deviation %.2e)", worst));

  // Save/load round-trip and thread independence.
  bool roundtrip_ok = true, threads_ok = true;
  const auto probes = random_sample(50, 2);
  for (Algorithm algo : {Algorithm::kOriginal, Algorithm::kHst}) {
    ForestConfig cfg;
    cfg.algorithm = algo;
    cfg.n_trees = 50;
    cfg.seed = 77;
    cfg.subsample_size = 10;
    cfg.root_rect_policy = PaddedRoot{0.5};
    const Forest f1 = fit(cfg, s, 1);
    const Forest f8 = fit(cfg, s, 8);
    const std::string text = model_to_json(f1);
    const Forest back = model_from_json(text);
    roundtrip_ok = roundtrip_ok && model_to_json(back) == text;
    const auto a = score(f1, probes, 1);
    const auto b = score(back, probes, 4);
    const auto c = score(f8, probes, 3);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      roundtrip_ok = roundtrip_ok && a[i].per_tree_depths == b[i].per_tree_depths &&
                     a[i].mean_depth == b[i].mean_depth;
      threads_ok = threads_ok && a[i].per_tree_depths == c[i].per_tree_depths &&
                   a[i].out_of_domain_count == c[i].out_of_domain_count;
    }
  }
  r.check(roundtrip_ok, "model save/load scores identically");
  r.check(threads_ok, "forest results independent of thread count");
  return r;
}

const std::vector<std::pair<std::string, std::function<Report()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Report()>>> all = {
      {"exact original expected depths", criterion_1},
      {"original per-depth masses", criterion_2},
      {"HST expected depths (root <0,110) x <-5,105))", criterion_3},
      {"HST per-depth masses (root <0,110) x <-5,105))", criterion_4},
      {"path trace of [25,85]", criterion_5},
      {"oracle / Monte Carlo agreement", criterion_6},
      {"deterministic example replay", criterion_7},
      {"novelty separation in a seeded HST forest", criterion_8},
      {"structural invariants", criterion_9},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria().size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n));
  }
  if (selected.empty()) {
    for (std::size_t n = 1; n <= criteria().size(); ++n) selected.push_back(n);
  }

  bool all = true;
  for (std::size_t n : selected) {
    const auto& [title, run] = criteria()[n - 1];
    Report r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.lines.push_back(std::string("error ") + e.what());
    }
    std::printf("criterion %zu: %s  %s\n", n, r.pass ? "PASS" : "FAIL", title.c_str());
    for (const std::string& line : r.lines) std::printf("    %s\n", line.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
