#pragma once

#include <string>

#include "novelty/forest.hpp"

namespace novelty {

// Graphviz rendering of one tree. Internal nodes show their rectangle and
// split; leaves show their depth and training count. Fill colour encodes the
// depth bucket so shallow leaves stand out.
std::string to_dot(const OriginalTree& tree, const std::string& name = "tree");
std::string to_dot(const HalfSpaceTree& tree, const std::string& name = "tree");
std::string to_dot(const Tree& tree, const std::string& name = "tree");

}  // namespace novelty
