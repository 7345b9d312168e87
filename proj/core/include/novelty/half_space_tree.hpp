#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>

#include "novelty/eval_result.hpp"
#include "novelty/geometry.hpp"
#include "novelty/random.hpp"

namespace novelty {

inline constexpr std::size_t kDefaultHstMaxDepth = 64;

struct HstNode {
  Hyperrectangle rect;  // half-open cell of the possibility space
  std::optional<std::size_t> split_dim;
  std::unique_ptr<HstNode> left;   // <x, s) in split_dim
  std::unique_ptr<HstNode> right;  // <s, y) in split_dim
  std::size_t sample_count = 0;
  // Leaf that still holds >= 2 training points: max_depth was reached or the
  // chosen dimension could no longer be halved in double precision.
  bool truncated = false;

  bool is_leaf() const noexcept { return !split_dim.has_value(); }
};

class HalfSpaceTree {
 public:
  HalfSpaceTree(std::unique_ptr<HstNode> root, std::size_t n_dims,
                std::size_t train_size)
      : root_(std::move(root)), n_dims_(n_dims), train_size_(train_size) {}

  const HstNode& root() const noexcept { return *root_; }
  const Hyperrectangle& root_rect() const noexcept { return root_->rect; }
  std::size_t n_dims() const noexcept { return n_dims_; }
  std::size_t train_size() const noexcept { return train_size_; }

 private:
  std::unique_ptr<HstNode> root_;
  std::size_t n_dims_;
  std::size_t train_size_;
};

struct HstBuildOptions {
  std::size_t max_depth = kDefaultHstMaxDepth;
};

// Grows the tree level by level from root_rect. Each unfinished leaf draws
// a dimension uniformly over all n dimensions and is halved at the middle of
// that range; the sample only decides when a cell is finished (it holds at
// most one training point).
//
// Throws EmptyInputError, DimensionError, OutOfDomainError (a training point
// outside root_rect), ParameterError (root_rect not half-open or empty in
// some dimension, max_depth == 0).
HalfSpaceTree build_hst(std::span<const DataPoint> sample,
                        const Hyperrectangle& root_rect, RandomSource& rng,
                        const HstBuildOptions& options = {});

// Throws OutOfDomainError when p lies outside the root rect.
EvalResult evaluate_hst(const HalfSpaceTree& tree, const DataPoint& p);

// Depth only; std::nullopt when p lies outside the root rect.
std::optional<std::size_t> hst_depth(const HalfSpaceTree& tree,
                                     const DataPoint& p);

// Half-open root box padded by pad_fraction of the data extent on each side.
// The upper bound is nudged one ulp past max + pad so the data maximum is
// inside; a zero-extent dimension gets a unit-width interval centred on the
// value.
Hyperrectangle default_root_rect(std::span<const DataPoint> sample,
                                 double pad_fraction);

}  // namespace novelty
