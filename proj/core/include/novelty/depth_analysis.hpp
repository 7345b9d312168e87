#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "novelty/forest.hpp"
#include "novelty/geometry.hpp"

namespace novelty {

inline constexpr std::size_t kDefaultTruncation = 64;

// Probability mass over leaf depths 0..K plus whatever lies beyond K.
struct DepthDistribution {
  std::vector<double> mass;  // mass[k] = P(depth == k), k = 0..truncation
  double tail_mass = 0.0;    // P(depth > truncation)
  // Contribution of depths > truncation to `expected`.
  double tail_expectation = 0.0;
  double expected = 0.0;     // exact E[depth] (tail included)
  std::size_t truncation = 0;

  double at(std::size_t depth) const noexcept {
    return depth < mass.size() ? mass[depth] : 0.0;
  }
  double total() const noexcept;  // sum(mass) + tail_mass
};

// How a point that is not in the sample is routed by exact_original when
// its coordinate falls strictly between two sample projections.
enum class NoveltyRouting {
  // p_d is an extra breakpoint of the split range, so p goes left exactly
  // when p_d <= z. This is the distribution the tree builder realises.
  kExact,
  // Each gap between consecutive sample projections is represented by its
  // middle split; p takes that side for the whole gap. Reproduces the
  // reference tabulation of the novelty row.
  kGapMidpoint,
};

// Exact leaf-depth distribution of p under the original isolation tree.
// Memoizes on the node sample; the state count grows combinatorially with
// |sample|, so this is a desk-scale verification tool (a dozen points run
// in milliseconds).
//
// Throws ParameterError when |sample| < 2 or truncation < 1, DimensionError.
DepthDistribution exact_original(std::span<const DataPoint> sample,
                                 const DataPoint& p,
                                 std::size_t truncation = kDefaultTruncation,
                                 NoveltyRouting routing = NoveltyRouting::kExact);

// Exact leaf-depth distribution of p under the half-space tree with the
// given root. States are p's current cell; a dimension in which every
// co-resident sample point shares p's coordinate is inert (its splits never
// change membership), and its self-loops are summed geometrically, so the
// expectation is exact and the tail is accounted for rather than dropped.
//
// Throws OutOfDomainError (p or a sample point outside root_rect),
// InfiniteDepthError (p coincides with >= 1 other sample point in every
// dimension), ParameterError, DimensionError.
DepthDistribution exact_hst(std::span<const DataPoint> sample,
                            const Hyperrectangle& root_rect,
                            const DataPoint& p,
                            std::size_t truncation = kDefaultTruncation);

// Expected number of fair-coin flips until the k-th success:
// sum_{n>=k} C(n-1, k-1) 2^-n n = 2k. Throws ParameterError for k < 1.
double negbin_expected(std::size_t k);
// C(n-1, k-1) 2^-n: probability that the k-th success lands on flip n.
double negbin_mass(std::size_t k, std::size_t n);
// sum_{n=from}^{to} C(n-1, k-1) 2^-n n; `to` may be SIZE_MAX for the tail.
double negbin_partial_expectation(std::size_t k, std::size_t from,
                                  std::size_t to);

// One step of a scripted isolation path under the original algorithm.
struct PathStep {
  Hyperrectangle start_space;  // bounding box of the node sample
  std::size_t dim = 0;
  Interval split_range;        // closed range the threshold is drawn from
  std::size_t dimension_choices = 1;  // dims with positive extent
  double probability = 0.0;    // |split_range| / (choices * |extent|)
  Hyperrectangle end_space;    // bounding box of p's child sample
};

struct ScriptedSplit {
  std::size_t dim = 0;
  double lo = 0.0;
  double hi = 0.0;
};

// Replays one path, step by step. Every threshold in a step's range must
// send p into the same child, i.e. the range may not straddle a sample
// projection (or p's own coordinate).
//
// Throws ScriptError when a range leaves the node extent, straddles a
// breakpoint, uses a dimension without extent, or continues after p is
// isolated.
std::vector<PathStep> trace_path(std::span<const DataPoint> sample,
                                 const DataPoint& p,
                                 std::span<const ScriptedSplit> script);

struct MonteCarloResult {
  double mean = 0.0;
  std::optional<double> stderr_mean;  // absent for a single trial
  std::vector<std::size_t> histogram;  // histogram[k] = trials at depth k
  std::size_t trials = 0;
  std::size_t out_of_domain = 0;  // HST trials where p left the root rect
};

struct MonteCarloOptions {
  Algorithm algorithm = Algorithm::kOriginal;
  std::optional<Hyperrectangle> root_rect;  // required for HST
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_depth;
  std::size_t threads = 1;
};

// Builds `trials` independent trees (trial i seeded with derive_seed(seed,
// i)) and evaluates p in each. Aggregation is in integers, so the result is
// identical for any thread count.
MonteCarloResult monte_carlo(std::span<const DataPoint> sample,
                             const DataPoint& p,
                             const MonteCarloOptions& options);

}  // namespace novelty
