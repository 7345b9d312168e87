#include "novelty/half_space_tree.hpp"

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "novelty/errors.hpp"

namespace novelty {
namespace {

struct Pending {
  HstNode* node;
  std::vector<std::size_t> members;
  std::size_t depth;
};

void check_root(const Hyperrectangle& root, std::size_t n) {
  if (root.dims() != n) {
    throw DimensionError("root rect has " + std::to_string(root.dims()) +
                         " dimensions, data has " + std::to_string(n));
  }
  if (root.closure() != Closure::kHalfOpenRight) {
    throw ParameterError("root rect must be half-open");
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (root[d].empty()) {
      throw ParameterError("root rect is empty in dimension " +
                           std::to_string(d));
    }
  }
}

}  // namespace

HalfSpaceTree build_hst(std::span<const DataPoint> sample,
                        const Hyperrectangle& root_rect, RandomSource& rng,
                        const HstBuildOptions& options) {
  const std::size_t n = validate_points(sample);
  check_root(root_rect, n);
  if (options.max_depth == 0) throw ParameterError("max_depth must be positive");
  for (const DataPoint& p : sample) {
    if (!root_rect.contains(p)) {
      throw OutOfDomainError("training point " + to_string(p) +
                             " lies outside the root rect " +
                             to_string(root_rect));
    }
  }

  std::vector<std::size_t> dims(n);
  for (std::size_t d = 0; d < n; ++d) dims[d] = d;

  auto root = std::make_unique<HstNode>();
  root->rect = root_rect;
  root->sample_count = sample.size();

  std::vector<std::size_t> all(sample.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  std::deque<Pending> frontier;
  frontier.push_back({root.get(), std::move(all), 0});
  while (!frontier.empty()) {
    Pending item = std::move(frontier.front());
    frontier.pop_front();
    HstNode& node = *item.node;
    if (item.members.size() <= 1) continue;
    if (item.depth >= options.max_depth) {
      node.truncated = true;
      continue;
    }
    const std::size_t d = rng.choose_dimension(dims);
    if (!can_midpoint_split(node.rect, d)) {
      node.truncated = true;
      continue;
    }
    auto [lrect, rrect] = midpoint_split(node.rect, d);
    std::vector<std::size_t> left, right;
    for (std::size_t i : item.members) {
      (lrect.contains(sample[i]) ? left : right).push_back(i);
    }
    node.split_dim = d;
    node.left = std::make_unique<HstNode>();
    node.left->rect = std::move(lrect);
    node.left->sample_count = left.size();
    node.right = std::make_unique<HstNode>();
    node.right->rect = std::move(rrect);
    node.right->sample_count = right.size();
    frontier.push_back({node.left.get(), std::move(left), item.depth + 1});
    frontier.push_back({node.right.get(), std::move(right), item.depth + 1});
  }
  return HalfSpaceTree(std::move(root), n, sample.size());
}

EvalResult evaluate_hst(const HalfSpaceTree& tree, const DataPoint& p) {
  if (p.dims() != tree.n_dims()) {
    throw DimensionError("point has " + std::to_string(p.dims()) +
                         " coordinates, tree expects " +
                         std::to_string(tree.n_dims()));
  }
  if (!tree.root_rect().contains(p)) {
    throw OutOfDomainError("point " + to_string(p) +
                           " lies outside the possibility space " +
                           to_string(tree.root_rect()));
  }
  EvalResult result;
  const HstNode* node = &tree.root();
  result.path.push_back(node->rect);
  while (!node->is_leaf()) {
    node = node->left->rect.contains(p) ? node->left.get() : node->right.get();
    result.path.push_back(node->rect);
  }
  result.depth = result.path.size() - 1;
  return result;
}

std::optional<std::size_t> hst_depth(const HalfSpaceTree& tree,
                                     const DataPoint& p) {
  if (p.dims() != tree.n_dims()) {
    throw DimensionError("point has " + std::to_string(p.dims()) +
                         " coordinates, tree expects " +
                         std::to_string(tree.n_dims()));
  }
  if (!tree.root_rect().contains(p)) return std::nullopt;
  std::size_t depth = 0;
  const HstNode* node = &tree.root();
  while (!node->is_leaf()) {
    const std::size_t d = *node->split_dim;
    node = p[d] < node->left->rect[d].hi ? node->left.get() : node->right.get();
    ++depth;
  }
  return depth;
}

Hyperrectangle default_root_rect(std::span<const DataPoint> sample,
                                 double pad_fraction) {
  if (!(pad_fraction >= 0.0) || !std::isfinite(pad_fraction)) {
    throw ParameterError("pad fraction must be a finite nonnegative number");
  }
  const Hyperrectangle box = bounding_box(sample);
  std::vector<Interval> intervals;
  intervals.reserve(box.dims());
  for (std::size_t d = 0; d < box.dims(); ++d) {
    const double lo = box[d].lo;
    const double hi = box[d].hi;
    const double extent = hi - lo;
    if (extent == 0.0) {
      intervals.emplace_back(lo - 0.5, hi + 0.5, Closure::kHalfOpenRight);
      continue;
    }
    const double pad = pad_fraction * extent;
    const double upper = hi + pad;
    intervals.emplace_back(lo - pad, std::nextafter(upper, HUGE_VAL),
                           Closure::kHalfOpenRight);
  }
  return Hyperrectangle(std::move(intervals));
}

}  // namespace novelty
