#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "novelty/eval_result.hpp"
#include "novelty/geometry.hpp"
#include "novelty/random.hpp"

namespace novelty {

// rho(v) = (dim, threshold): go left iff pi_dim(p) <= threshold.
struct SplitRule {
  std::size_t dim = 0;
  double threshold = 0.0;

  bool goes_left(const DataPoint& p) const noexcept {
    return p[dim] <= threshold;
  }
  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

enum class LeafKind {
  kIsolated,   // exactly one training point
  kDuplicate,  // several identical points; no dimension can separate them
  kTruncated,  // stopped by max_depth
};

struct OriginalNode {
  Hyperrectangle rect;  // closed bounding box of the node's sample
  std::optional<SplitRule> rule;
  std::unique_ptr<OriginalNode> left;
  std::unique_ptr<OriginalNode> right;
  std::size_t count = 0;                // training points in the node
  std::vector<DataPoint> leaf_points;   // leaves only
  LeafKind leaf_kind = LeafKind::kIsolated;

  bool is_leaf() const noexcept { return !rule.has_value(); }
};

class OriginalTree {
 public:
  OriginalTree(std::unique_ptr<OriginalNode> root, std::size_t n_dims,
               std::size_t train_size)
      : root_(std::move(root)), n_dims_(n_dims), train_size_(train_size) {}

  const OriginalNode& root() const noexcept { return *root_; }
  std::size_t n_dims() const noexcept { return n_dims_; }
  std::size_t train_size() const noexcept { return train_size_; }

 private:
  std::unique_ptr<OriginalNode> root_;
  std::size_t n_dims_;
  std::size_t train_size_;
};

struct OriginalBuildOptions {
  std::optional<std::size_t> max_depth;  // none: grow until isolation
};

// Grows a tree level by level: every unfinished leaf of T_j is split (in
// left-to-right order) before any leaf of T_{j+1}, so a scripted source
// replays draws in that order. The split dimension is drawn among the
// dimensions where the node's sample has positive extent, the threshold
// uniformly inside that extent.
//
// Throws EmptyInputError, DimensionError, DataError; ScriptError when a
// scripted threshold leaves one side empty.
OriginalTree build_original_tree(std::span<const DataPoint> sample,
                                 RandomSource& rng,
                                 const OriginalBuildOptions& options = {});

EvalResult evaluate_original(const OriginalTree& tree, const DataPoint& p);

// Depth only, without materialising the path.
std::size_t original_depth(const OriginalTree& tree, const DataPoint& p);

}  // namespace novelty
