#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "novelty/geometry.hpp"

namespace novelty {

// Outcome of routing one point from the root to a leaf.
struct EvalResult {
  std::size_t depth = 0;              // edges on the root-to-leaf path
  std::vector<Hyperrectangle> path;   // rects of visited nodes, root first
  // Index into `path` of the first node (below the root) whose rect does
  // not contain the point. Only the original tree can produce one.
  std::optional<std::size_t> first_violation_depth;
};

}  // namespace novelty
