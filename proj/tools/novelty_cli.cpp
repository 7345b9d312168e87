#include <charconv>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "novelty/csv.hpp"
#include "novelty/depth_analysis.hpp"
#include "novelty/dot_export.hpp"
#include "novelty/errors.hpp"
#include "novelty/forest.hpp"
#include "novelty/model_io.hpp"
#include "novelty/reference_data.hpp"
#include "novelty/report.hpp"

namespace {

using namespace novelty;

// Flag combinations CLI11 cannot express on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kRectHelp =
    "root cell as \"lo0,hi0;lo1,hi1;...\" (half-open per dimension)";

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void print_nested(const std::exception& e, int level = 0) {
  std::cerr << (level ? "  caused by: " : "error: ") << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_nested(inner, level + 1);
  }
}

struct InputFlags {
  std::string path;
  char delimiter = ',';
  bool header = false;

  void add(CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--input,-i", path, "CSV file, one point per row");
    if (required) opt->required();
    cmd->add_option("--delimiter", delimiter, "CSV field delimiter");
    cmd->add_flag("--header", header, "first CSV row is a header");
  }

  std::vector<DataPoint> load() const {
    return ingest_csv(path, CsvOptions{delimiter, header}).points;
  }
};

// Shared by analyze and mc.
struct QueryFlags {
  std::string algorithm;
  InputFlags input;
  std::string point;
  std::string root_rect;
  std::optional<double> pad;

  void add(CLI::App* cmd) {
    cmd->add_option("--algorithm,-a", algorithm, "original | hst")
        ->required()
        ->check(CLI::IsMember({"original", "hst"}));
    input.add(cmd, false);
    cmd->add_option("--point,-p", point, "query point, e.g. \"25,20\"")->required();
    auto* rect = cmd->add_option("--root-rect", root_rect, kRectHelp);
    auto* p = cmd->add_option("--pad", pad,
                              "HST root padding as a fraction of each extent");
    rect->excludes(p);
  }

  // Without --input the built-in two-cluster sample is used.
  std::vector<DataPoint> sample() const {
    return input.path.empty() ? reference::sample() : input.load();
  }

  Algorithm algo() const {
    const Algorithm a = parse_algorithm(algorithm);
    if (a == Algorithm::kOriginal && (!root_rect.empty() || pad)) {
      throw UsageError("--root-rect/--pad only apply to --algorithm hst");
    }
    return a;
  }

  Hyperrectangle root(const std::vector<DataPoint>& s) const {
    if (!root_rect.empty()) return parse_rect(root_rect);
    return default_root_rect(s, pad.value_or(PaddedRoot{}.pad_fraction));
  }
};

NoveltyRouting parse_routing(const std::string& name) {
  if (name == "exact") return NoveltyRouting::kExact;
  return NoveltyRouting::kGapMidpoint;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isolation and half-space tree novelty detection"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  // fit ------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "grow a forest and save it as JSON");
  std::string fit_algorithm;
  std::size_t fit_trees = 100;
  std::uint64_t fit_seed = 0;
  std::optional<std::size_t> fit_subsample;
  std::optional<std::size_t> fit_max_depth;
  std::string fit_rect;
  std::optional<double> fit_pad;
  std::string fit_output;
  std::size_t fit_threads = 1;
  InputFlags fit_input;
  fit_cmd->add_option("--algorithm,-a", fit_algorithm, "original | hst")
      ->required()
      ->check(CLI::IsMember({"original", "hst"}));
  fit_cmd->add_option("--trees,-t", fit_trees, "number of trees")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--seed,-s", fit_seed, "master seed");
  fit_cmd->add_option("--subsample", fit_subsample, "points per tree")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--max-depth", fit_max_depth, "depth limit")
      ->check(CLI::PositiveNumber);
  auto* fit_rect_opt = fit_cmd->add_option("--root-rect", fit_rect, kRectHelp);
  fit_cmd->add_option("--pad", fit_pad,
                      "HST root padding as a fraction of each extent")
      ->excludes(fit_rect_opt);
  fit_input.add(fit_cmd, true);
  fit_cmd->add_option("--output,-o", fit_output, "model file")->required();
  fit_cmd->add_option("--threads", fit_threads, "worker threads (0 = all cores)");

  // score ----------------------------------------------------------------
  auto* score_cmd = app.add_subcommand("score", "score points against a model");
  std::string score_model;
  bool score_normalized = false;
  std::size_t score_threads = 1;
  InputFlags score_input;
  score_cmd->add_option("--model,-m", score_model, "model file")->required();
  score_input.add(score_cmd, true);
  score_cmd->add_flag("--normalized", score_normalized,
                      "append the 2^(-depth/c(m)) anomaly score");
  score_cmd->add_option("--threads", score_threads, "worker threads (0 = all cores)");

  // analyze --------------------------------------------------------------
  auto* analyze_cmd =
      app.add_subcommand("analyze", "exact depth distribution of one point");
  QueryFlags analyze_q;
  std::size_t analyze_truncate = kDefaultTruncation;
  std::string analyze_routing;
  std::string analyze_format = "tsv";
  analyze_q.add(analyze_cmd);
  analyze_cmd->add_option("--truncate", analyze_truncate,
                          "deepest level tabulated individually")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--routing", analyze_routing,
                          "original only: exact | gap-midpoint")
      ->check(CLI::IsMember({"exact", "gap-midpoint"}));
  analyze_cmd->add_option("--format", analyze_format, "tsv | markdown")
      ->check(CLI::IsMember({"tsv", "markdown", "md"}));

  // mc -------------------------------------------------------------------
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo depth estimate of one point");
  QueryFlags mc_q;
  std::size_t mc_trials = 10000;
  std::uint64_t mc_seed = 0;
  std::optional<std::size_t> mc_max_depth;
  std::size_t mc_threads = 1;
  std::string mc_format = "tsv";
  mc_q.add(mc_cmd);
  mc_cmd->add_option("--trials", mc_trials, "number of trees to grow")
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed,-s", mc_seed, "master seed");
  mc_cmd->add_option("--max-depth", mc_max_depth, "depth limit")
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--threads", mc_threads, "worker threads (0 = all cores)");
  mc_cmd->add_option("--format", mc_format, "tsv | markdown")
      ->check(CLI::IsMember({"tsv", "markdown", "md"}));

  // export-dot -----------------------------------------------------------
  auto* dot_cmd = app.add_subcommand("export-dot", "write one tree as Graphviz DOT");
  std::string dot_model;
  std::size_t dot_tree = 0;
  dot_cmd->add_option("--model,-m", dot_model, "model file")->required();
  dot_cmd->add_option("--tree", dot_tree, "tree index");

  // reproduce ------------------------------------------------------------
  auto* repro_cmd =
      app.add_subcommand("reproduce", "recompute the reference tables");
  std::string repro_table;
  std::string repro_rect;
  std::string repro_format = "tsv";
  repro_cmd->add_option("--table", repro_table,
                        "t1 | original-probs | hst-probs | expected")
      ->required()
      ->check(CLI::IsMember({"t1", "original-probs", "hst-probs", "expected"}));
  repro_cmd->add_option("--root-rect", repro_rect,
                        std::string(kRectHelp) +
                            "; defaults to <-10,125) x <-5,105)");
  repro_cmd->add_option("--format", repro_format, "tsv | markdown")
      ->check(CLI::IsMember({"tsv", "markdown", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*fit_cmd) {
      ForestConfig cfg;
      cfg.algorithm = parse_algorithm(fit_algorithm);
      if (cfg.algorithm == Algorithm::kOriginal && (!fit_rect.empty() || fit_pad)) {
        throw UsageError("--root-rect/--pad only apply to --algorithm hst");
      }
      cfg.n_trees = fit_trees;
      cfg.seed = fit_seed;
      cfg.subsample_size = fit_subsample;
      cfg.max_depth = fit_max_depth;
      if (!fit_rect.empty()) {
        cfg.root_rect_policy = ExplicitRoot{parse_rect(fit_rect)};
      } else if (fit_pad) {
        cfg.root_rect_policy = PaddedRoot{*fit_pad};
      }
      const auto data = fit_input.load();
      save_model(fit(cfg, data, fit_threads), fit_output);
    } else if (*score_cmd) {
      const Forest forest = load_model(score_model);
      const auto points = score_input.load();
      const auto scores = score(forest, points, score_threads);
      const std::size_t m = effective_sample_size(forest);
      std::cout << "index\tmean_depth\tmin_depth\tmax_depth\tout_of_domain";
      if (score_normalized) std::cout << "\tscore";
      std::cout << '\n';
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const Score& s = scores[i];
        const auto [lo, hi] = std::minmax_element(s.per_tree_depths.begin(),
                                                  s.per_tree_depths.end());
        std::cout << i << '\t' << shortest(s.mean_depth) << '\t' << *lo << '\t'
                  << *hi << '\t' << s.out_of_domain_count;
        if (score_normalized) {
          std::cout << '\t' << shortest(normalized_score(s.mean_depth, m));
        }
        std::cout << '\n';
      }
    } else if (*analyze_cmd) {
      const Algorithm algo = analyze_q.algo();
      if (algo == Algorithm::kHst && !analyze_routing.empty()) {
        throw UsageError("--routing only applies to --algorithm original");
      }
      const auto s = analyze_q.sample();
      const DataPoint p = parse_point(analyze_q.point);
      const DepthDistribution d =
          algo == Algorithm::kOriginal
              ? exact_original(s, p, analyze_truncate,
                               analyze_routing.empty()
                                   ? NoveltyRouting::kExact
                                   : parse_routing(analyze_routing))
              : exact_hst(s, analyze_q.root(s), p, analyze_truncate);
      std::cout << render(distribution_table(d), parse_table_format(analyze_format));
    } else if (*mc_cmd) {
      MonteCarloOptions opts;
      opts.algorithm = mc_q.algo();
      const auto s = mc_q.sample();
      if (opts.algorithm == Algorithm::kHst) opts.root_rect = mc_q.root(s);
      opts.trials = mc_trials;
      opts.seed = mc_seed;
      opts.max_depth = mc_max_depth;
      opts.threads = mc_threads;
      const MonteCarloResult r = monte_carlo(s, parse_point(mc_q.point), opts);
      std::cout << render(monte_carlo_table(r), parse_table_format(mc_format));
    } else if (*dot_cmd) {
      const Forest forest = load_model(dot_model);
      if (dot_tree >= forest.trees.size()) {
        throw UsageError("--tree " + std::to_string(dot_tree) +
                         " out of range (model has " +
                         std::to_string(forest.trees.size()) + " trees)");
      }
      std::cout << to_dot(forest.trees[dot_tree],
                          "tree_" + std::to_string(dot_tree));
    } else if (*repro_cmd) {
      const TableFormat fmt = parse_table_format(repro_format);
      const Hyperrectangle root = repro_rect.empty()
                                      ? reference::analysis_root_rect()
                                      : parse_rect(repro_rect);
      Table t;
      if (repro_table == "t1") t = reference::t1_table();
      else if (repro_table == "original-probs") t = reference::original_probs_table();
      else if (repro_table == "hst-probs") t = reference::hst_probs_table(root);
      else t = reference::expected_table(root);
      std::cout << render(t, fmt);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n'
              << "run with --help for usage\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    print_nested(e);
    return 1;
  }
  std::cout.flush();
  return std::cout ? 0 : 1;
}
