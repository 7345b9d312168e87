#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "novelty/depth_analysis.hpp"
#include "novelty/geometry.hpp"
#include "novelty/random.hpp"

// Built-in fixtures: the twelve-point two-cluster sample used throughout the
// worked examples, its reference points, and the scripted splits that replay
// the example trees.
namespace novelty::reference {

// Six points top-left, six points bottom-right.
std::vector<DataPoint> sample();

// The top-left cluster, in table order.
std::vector<DataPoint> table_points();

// The novelty point of the worked examples.
DataPoint novelty_point();

// Label the reference summary tables use for the novelty row.
DataPoint tabulated_novelty_point();

// Root cell used by the worked HST example.
Hyperrectangle example_root_rect();

// Root cell that reproduces the reference HST distributions (see README).
Hyperrectangle analysis_root_rect();

// Seven-step isolation path for [25,85].
std::vector<ScriptedSplit> trace_script();

// Replays the worked original-tree example (BFS draw order).
std::unique_ptr<RandomSource> original_example_source();

// Replays the worked HST example; draws past the scripted levels fall back to
// a seeded source and do not affect the example evaluations.
std::unique_ptr<RandomSource> hst_example_source(std::uint64_t fallback_seed = 0);

}  // namespace novelty::reference
