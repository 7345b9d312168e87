#include "novelty/original_tree.hpp"

#include <deque>
#include <string>

#include "novelty/errors.hpp"

namespace novelty {
namespace {

struct Pending {
  OriginalNode* node;
  std::vector<std::size_t> members;
  std::size_t depth;
};

void make_leaf(OriginalNode& node, std::span<const DataPoint> sample,
               const std::vector<std::size_t>& members, LeafKind kind) {
  node.leaf_kind = kind;
  node.leaf_points.reserve(members.size());
  for (std::size_t i : members) node.leaf_points.push_back(sample[i]);
}

std::unique_ptr<OriginalNode> new_node(std::span<const DataPoint> sample,
                                       const std::vector<std::size_t>& members) {
  auto node = std::make_unique<OriginalNode>();
  node->rect = bounding_box(sample, members);
  node->count = members.size();
  return node;
}

void check_dims(const OriginalTree& tree, const DataPoint& p) {
  if (p.dims() != tree.n_dims()) {
    throw DimensionError("point has " + std::to_string(p.dims()) +
                         " coordinates, tree expects " +
                         std::to_string(tree.n_dims()));
  }
}

}  // namespace

OriginalTree build_original_tree(std::span<const DataPoint> sample,
                                 RandomSource& rng,
                                 const OriginalBuildOptions& options) {
  const std::size_t n = validate_points(sample);

  std::vector<std::size_t> all(sample.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto root = new_node(sample, all);

  std::deque<Pending> frontier;
  frontier.push_back({root.get(), std::move(all), 0});
  std::vector<std::size_t> candidates;

  while (!frontier.empty()) {
    Pending item = std::move(frontier.front());
    frontier.pop_front();
    OriginalNode& node = *item.node;

    if (item.members.size() == 1) {
      make_leaf(node, sample, item.members, LeafKind::kIsolated);
      continue;
    }
    candidates.clear();
    for (std::size_t d = 0; d < n; ++d) {
      if (node.rect[d].lo < node.rect[d].hi) candidates.push_back(d);
    }
    if (candidates.empty()) {
      make_leaf(node, sample, item.members, LeafKind::kDuplicate);
      continue;
    }
    if (options.max_depth && item.depth >= *options.max_depth) {
      make_leaf(node, sample, item.members, LeafKind::kTruncated);
      continue;
    }

    const std::size_t d = rng.choose_dimension(candidates);
    const double z = rng.split_point(node.rect[d].lo, node.rect[d].hi);

    std::vector<std::size_t> left, right;
    for (std::size_t i : item.members) {
      (sample[i][d] <= z ? left : right).push_back(i);
    }
    if (left.empty() || right.empty()) {
      throw ScriptError("split at " + std::to_string(z) + " in dimension " +
                        std::to_string(d) + " leaves one side empty");
    }

    node.rule = SplitRule{d, z};
    node.left = new_node(sample, left);
    node.right = new_node(sample, right);
    frontier.push_back({node.left.get(), std::move(left), item.depth + 1});
    frontier.push_back({node.right.get(), std::move(right), item.depth + 1});
  }
  return OriginalTree(std::move(root), n, sample.size());
}

EvalResult evaluate_original(const OriginalTree& tree, const DataPoint& p) {
  check_dims(tree, p);
  EvalResult result;
  const OriginalNode* node = &tree.root();
  result.path.push_back(node->rect);
  while (!node->is_leaf()) {
    node = node->rule->goes_left(p) ? node->left.get() : node->right.get();
    result.path.push_back(node->rect);
    if (!result.first_violation_depth && !node->rect.contains(p)) {
      result.first_violation_depth = result.path.size() - 1;
    }
  }
  result.depth = result.path.size() - 1;
  return result;
}

std::size_t original_depth(const OriginalTree& tree, const DataPoint& p) {
  check_dims(tree, p);
  std::size_t depth = 0;
  const OriginalNode* node = &tree.root();
  while (!node->is_leaf()) {
    node = node->rule->goes_left(p) ? node->left.get() : node->right.get();
    ++depth;
  }
  return depth;
}

}  // namespace novelty
