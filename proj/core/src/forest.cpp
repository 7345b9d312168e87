#include "novelty/forest.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>

#include "novelty/errors.hpp"
#include "novelty/parallel.hpp"

namespace novelty {
namespace {

constexpr double kEulerGamma = 0.5772156649015329;

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Partial Fisher-Yates: the first k slots end up a uniform k-subset.
std::vector<DataPoint> subsample(std::span<const DataPoint> data,
                                 std::size_t k, RandomSource& rng) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<DataPoint> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(data[idx[i]]);
  return out;
}

}  // namespace

std::string to_string(Algorithm a) {
  return a == Algorithm::kOriginal ? "original" : "hst";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "original") return Algorithm::kOriginal;
  if (name == "hst") return Algorithm::kHst;
  throw ParameterError("unknown algorithm '" + std::string(name) +
                       "' (expected original or hst)");
}

Forest fit(const ForestConfig& config, std::span<const DataPoint> data,
           std::size_t threads) {
  return fit(
      config, data,
      [seed = config.seed](std::size_t i) -> std::unique_ptr<RandomSource> {
        return std::make_unique<SeededSource>(derive_seed(seed, i));
      },
      threads);
}

Forest fit(const ForestConfig& config, std::span<const DataPoint> data,
           const SourceFactory& sources, std::size_t threads) {
  const std::size_t n = validate_points(data);
  if (config.n_trees == 0) throw ParameterError("n_trees must be positive");
  if (config.subsample_size) {
    if (*config.subsample_size == 0 || *config.subsample_size > data.size()) {
      throw ParameterError("subsample size must be in [1, " +
                           std::to_string(data.size()) + "]");
    }
  }
  if (config.max_depth && *config.max_depth == 0) {
    throw ParameterError("max_depth must be positive");
  }

  Forest forest;
  forest.config = config;
  forest.n_dims = n;
  forest.train_size = data.size();
  forest.created_at = utc_timestamp();

  if (config.algorithm == Algorithm::kHst) {
    if (const auto* explicit_root = std::get_if<ExplicitRoot>(&config.root_rect_policy)) {
      forest.root_rect = explicit_root->rect;
    } else {
      forest.root_rect = default_root_rect(
          data, std::get<PaddedRoot>(config.root_rect_policy).pad_fraction);
    }
  }

  std::vector<std::optional<Tree>> built(config.n_trees);
  detail::parallel_for(config.n_trees, threads, [&](std::size_t i) {
    try {
      std::unique_ptr<RandomSource> rng = sources(i);
      std::vector<DataPoint> sampled;
      std::span<const DataPoint> sample = data;
      if (config.subsample_size && *config.subsample_size < data.size()) {
        sampled = subsample(data, *config.subsample_size, *rng);
        sample = sampled;
      }
      if (config.algorithm == Algorithm::kOriginal) {
        built[i].emplace(std::in_place_type<OriginalTree>,
                         build_original_tree(sample, *rng,
                                             {.max_depth = config.max_depth}));
      } else {
        HstBuildOptions opts;
        if (config.max_depth) opts.max_depth = *config.max_depth;
        built[i].emplace(std::in_place_type<HalfSpaceTree>,
                         build_hst(sample, *forest.root_rect, *rng, opts));
      }
    } catch (const std::exception& e) {
      std::throw_with_nested(TreeBuildError(i, e.what()));
    }
  });

  forest.trees.reserve(config.n_trees);
  for (auto& t : built) forest.trees.push_back(std::move(*t));
  return forest;
}

std::optional<std::size_t> tree_depth(const Tree& tree, const DataPoint& p) {
  if (const auto* original = std::get_if<OriginalTree>(&tree)) {
    return original_depth(*original, p);
  }
  return hst_depth(std::get<HalfSpaceTree>(tree), p);
}

std::vector<Score> score(const Forest& forest,
                         std::span<const DataPoint> points,
                         std::size_t threads) {
  for (const DataPoint& p : points) {
    if (p.dims() != forest.n_dims) {
      throw DimensionError("point " + to_string(p) + " has " +
                           std::to_string(p.dims()) +
                           " coordinates, forest expects " +
                           std::to_string(forest.n_dims));
    }
  }
  std::vector<Score> scores(points.size());
  detail::parallel_for(points.size(), threads, [&](std::size_t k) {
    Score& s = scores[k];
    s.per_tree_depths.reserve(forest.trees.size());
    std::uint64_t total = 0;
    for (const Tree& tree : forest.trees) {
      const std::optional<std::size_t> depth = tree_depth(tree, points[k]);
      if (!depth) ++s.out_of_domain_count;
      s.per_tree_depths.push_back(depth.value_or(0));
      total += depth.value_or(0);
    }
    // Integer sum first: the mean is exact up to one final rounding.
    s.mean_depth = forest.trees.empty()
                       ? 0.0
                       : static_cast<double>(total) /
                             static_cast<double>(forest.trees.size());
  });
  return scores;
}

double average_path_length(std::size_t m) {
  if (m < 2) return 0.0;
  if (m == 2) return 1.0;
  const double md = static_cast<double>(m);
  return 2.0 * (std::log(md - 1.0) + kEulerGamma) - 2.0 * (md - 1.0) / md;
}

double normalized_score(double mean_depth, std::size_t m) {
  if (m < 2) {
    throw ParameterError("normalized score needs a sample size of at least 2");
  }
  return std::pow(2.0, -mean_depth / average_path_length(m));
}

std::size_t effective_sample_size(const Forest& forest) {
  return forest.config.subsample_size.value_or(forest.train_size);
}

}  // namespace novelty
