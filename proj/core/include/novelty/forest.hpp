#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "novelty/geometry.hpp"
#include "novelty/half_space_tree.hpp"
#include "novelty/original_tree.hpp"
#include "novelty/random.hpp"

namespace novelty {

enum class Algorithm { kOriginal, kHst };

std::string to_string(Algorithm a);
// Accepts "original" and "hst". Throws ParameterError otherwise.
Algorithm parse_algorithm(std::string_view name);

struct ExplicitRoot {
  Hyperrectangle rect;
};
struct PaddedRoot {
  double pad_fraction = 0.1;
};
using RootRectPolicy = std::variant<ExplicitRoot, PaddedRoot>;

struct ForestConfig {
  Algorithm algorithm = Algorithm::kHst;
  std::size_t n_trees = 100;
  std::optional<std::size_t> subsample_size;  // psi; none = full sample
  std::uint64_t seed = 0;
  // Original: none = unlimited. HST: none = kDefaultHstMaxDepth.
  std::optional<std::size_t> max_depth;
  RootRectPolicy root_rect_policy = PaddedRoot{};  // ignored by Original
};

using Tree = std::variant<OriginalTree, HalfSpaceTree>;

struct Forest {
  ForestConfig config;
  std::vector<Tree> trees;
  std::size_t n_dims = 0;
  std::size_t train_size = 0;
  std::string created_at;  // ISO-8601 UTC, informational only
  // Shared by every HST in the forest; absent for Original forests.
  std::optional<Hyperrectangle> root_rect;
};

struct Score {
  double mean_depth = 0.0;
  std::vector<std::size_t> per_tree_depths;
  std::size_t out_of_domain_count = 0;  // HST only
};

// Produces the random source for tree i; used to replay scripted fixtures.
using SourceFactory =
    std::function<std::unique_ptr<RandomSource>(std::size_t tree_index)>;

// Tree i draws from SeededSource(derive_seed(config.seed, i)); subsampling
// (without replacement) consumes that same source before construction.
// `threads` = 0 uses the hardware concurrency; results do not depend on it.
//
// Build errors are rethrown with the tree index prepended to the message.
Forest fit(const ForestConfig& config, std::span<const DataPoint> data,
           std::size_t threads = 1);
Forest fit(const ForestConfig& config, std::span<const DataPoint> data,
           const SourceFactory& sources, std::size_t threads = 1);

// HST trees map out-of-domain points to depth 0 and count them.
std::vector<Score> score(const Forest& forest,
                         std::span<const DataPoint> points,
                         std::size_t threads = 1);

// Depth of p in one tree; nullopt for an HST point outside the root rect.
std::optional<std::size_t> tree_depth(const Tree& tree, const DataPoint& p);

// Average unsuccessful-search path length of a binary search tree on m
// items, c(m) = 2 (ln(m - 1) + gamma) - 2 (m - 1) / m, with c(2) = 1. This is
// the normaliser of the classic isolation forest score, not something
// specific to the half-space variant.
double average_path_length(std::size_t m);

// 2^(-mean_depth / c(m)) in (0, 1]; higher means more anomalous.
// Throws ParameterError for m < 2.
double normalized_score(double mean_depth, std::size_t m);

// Sample size each tree was trained on (psi or the full training size).
std::size_t effective_sample_size(const Forest& forest);

}  // namespace novelty
