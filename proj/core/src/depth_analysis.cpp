#include "novelty/depth_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "novelty/errors.hpp"
#include "novelty/parallel.hpp"

namespace novelty {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_point_dims(std::size_t n, const DataPoint& p) {
  if (p.dims() != n) {
    throw DimensionError("query point has " + std::to_string(p.dims()) +
                         " coordinates, sample has " + std::to_string(n));
  }
}

// Depth distribution (relative to the state) as compensated per-depth sums.
using RelativeDistribution = std::vector<double>;

DepthDistribution finalize(const RelativeDistribution& full,
                           std::size_t truncation) {
  DepthDistribution out;
  out.truncation = truncation;
  out.mass.assign(truncation + 1, 0.0);
  CompensatedSum expected, tail, tail_expectation;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const double w = full[k] * static_cast<double>(k);
    expected.add(w);
    if (k <= truncation) {
      out.mass[k] = full[k];
    } else {
      tail.add(full[k]);
      tail_expectation.add(w);
    }
  }
  out.expected = expected.value();
  out.tail_mass = tail.value();
  out.tail_expectation = tail_expectation.value();
  return out;
}

class OriginalRecursion {
 public:
  OriginalRecursion(std::span<const DataPoint> sample, const DataPoint& p,
                    NoveltyRouting routing)
      : sample_(sample), p_(p), routing_(routing), n_(p.dims()) {}

  const RelativeDistribution& solve(const std::vector<std::size_t>& members) {
    if (auto it = memo_.find(members); it != memo_.end()) return it->second;
    RelativeDistribution result = compute(members);
    return memo_.emplace(members, std::move(result)).first->second;
  }

 private:
  RelativeDistribution compute(const std::vector<std::size_t>& members) {
    if (members.size() <= 1) return {1.0};

    std::vector<std::size_t> splittable;
    for (std::size_t d = 0; d < n_; ++d) {
      const auto [lo, hi] = extent(members, d);
      if (lo < hi) splittable.push_back(d);
    }
    if (splittable.empty()) return {1.0};  // duplicate leaf

    const double dim_weight = 1.0 / static_cast<double>(splittable.size());
    std::vector<CompensatedSum> acc;
    std::vector<double> breaks;
    std::vector<std::size_t> child;

    for (std::size_t d : splittable) {
      const auto [lo, hi] = extent(members, d);
      breaks.clear();
      for (std::size_t i : members) breaks.push_back(sample_[i][d]);
      const double pd = p_[d];
      if (routing_ == NoveltyRouting::kExact && lo < pd && pd < hi) {
        breaks.push_back(pd);
      }
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

      for (std::size_t g = 0; g + 1 < breaks.size(); ++g) {
        const double a = breaks[g];
        const double b = breaks[g + 1];
        const double weight = dim_weight * (b - a) / (hi - lo);
        // Any threshold in (a, b) puts the same sample points on each side.
        const bool p_left = routing_ == NoveltyRouting::kExact
                                ? pd <= a
                                : pd <= a + (b - a) / 2.0;
        child.clear();
        for (std::size_t i : members) {
          if ((sample_[i][d] <= a) == p_left) child.push_back(i);
        }
        const RelativeDistribution& sub = solve(child);
        if (acc.size() < sub.size() + 1) acc.resize(sub.size() + 1);
        for (std::size_t k = 0; k < sub.size(); ++k) {
          acc[k + 1].add(weight * sub[k]);
        }
      }
    }
    RelativeDistribution out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] = acc[k].value();
    return out;
  }

  std::pair<double, double> extent(const std::vector<std::size_t>& members,
                                   std::size_t d) const {
    double lo = sample_[members.front()][d];
    double hi = lo;
    for (std::size_t i : members) {
      lo = std::min(lo, sample_[i][d]);
      hi = std::max(hi, sample_[i][d]);
    }
    return {lo, hi};
  }

  std::span<const DataPoint> sample_;
  const DataPoint& p_;
  NoveltyRouting routing_;
  std::size_t n_;
  std::map<std::vector<std::size_t>, RelativeDistribution> memo_;
};

// State of the half-space recursion: how often each dimension of p's cell
// has been halved. The cell and its membership follow from that.
using HalvingKey = std::vector<std::uint32_t>;

struct HstState {
  Hyperrectangle cell;
  std::vector<std::size_t> members;
  std::vector<std::size_t> active;  // dims whose splits can change members
  std::vector<HalvingKey> children;  // child key per active dim
  bool terminal = false;
};

class HstRecursion {
 public:
  HstRecursion(std::span<const DataPoint> sample, const DataPoint& p)
      : sample_(sample), p_(p), n_(p.dims()) {}

  const HstState& state(const HalvingKey& key) { return *states_.at(key); }

  const HstState& root(const Hyperrectangle& rect) {
    HalvingKey key(n_, 0);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < sample_.size(); ++i) {
      if (rect.contains(sample_[i])) members.push_back(i);
    }
    return insert(key, rect, std::move(members));
  }

  double expected(const HalvingKey& key) {
    if (auto it = expected_.find(key); it != expected_.end()) return it->second;
    const HstState& s = expand(key);
    double value = 0.0;
    if (!s.terminal) {
      CompensatedSum acc;
      acc.add(static_cast<double>(n_));
      for (const HalvingKey& child : s.children) acc.add(expected(child));
      value = acc.value() / static_cast<double>(s.active.size());
    }
    expected_.emplace(key, value);
    return value;
  }

  const HstState& expand(const HalvingKey& key) {
    HstState& s = *states_.at(key);
    if (s.terminal || !s.children.empty()) return s;
    for (std::size_t d : s.active) {
      auto [lrect, rrect] = split(s.cell, d);
      Hyperrectangle& next = lrect.contains(p_) ? lrect : rrect;
      std::vector<std::size_t> members;
      for (std::size_t i : s.members) {
        if (next[d].contains(sample_[i][d])) members.push_back(i);
      }
      HalvingKey child = key;
      ++child[d];
      if (!states_.contains(child)) insert(child, next, std::move(members));
      s.children.push_back(std::move(child));
    }
    return s;
  }

 private:
  std::pair<Hyperrectangle, Hyperrectangle> split(const Hyperrectangle& cell,
                                                  std::size_t d) const {
    if (!can_midpoint_split(cell, d)) {
      throw DegenerateSplitError(
          "cell " + to_string(cell) + " cannot be halved in dimension " +
          std::to_string(d) + " before the point is isolated");
    }
    return midpoint_split(cell, d);
  }

  const HstState& insert(const HalvingKey& key, const Hyperrectangle& cell,
                         std::vector<std::size_t> members) {
    auto s = std::make_unique<HstState>();
    s->cell = cell;
    s->members = std::move(members);
    s->terminal = s->members.size() <= 1;
    if (!s->terminal) {
      for (std::size_t d = 0; d < n_; ++d) {
        for (std::size_t i : s->members) {
          if (sample_[i][d] != p_[d]) {
            s->active.push_back(d);
            break;
          }
        }
      }
      if (s->active.empty()) {
        throw InfiniteDepthError(
            "point " + to_string(p_) + " coincides with " +
            std::to_string(s->members.size() - 1) +
            " other sample point(s); no split can isolate it");
      }
    }
    return *states_.emplace(key, std::move(s)).first->second;
  }

  std::span<const DataPoint> sample_;
  const DataPoint& p_;
  std::size_t n_;
  std::map<HalvingKey, std::unique_ptr<HstState>> states_;
  std::map<HalvingKey, double> expected_;
};

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

}  // namespace

double DepthDistribution::total() const noexcept {
  CompensatedSum s;
  for (double m : mass) s.add(m);
  s.add(tail_mass);
  return s.value();
}

DepthDistribution exact_original(std::span<const DataPoint> sample,
                                 const DataPoint& p, std::size_t truncation,
                                 NoveltyRouting routing) {
  if (sample.size() < 2) {
    throw ParameterError("exact analysis needs at least two sample points");
  }
  if (truncation < 1) throw ParameterError("truncation depth must be >= 1");
  check_point_dims(validate_points(sample), p);

  OriginalRecursion recursion(sample, p, routing);
  std::vector<std::size_t> all(sample.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return finalize(recursion.solve(all), truncation);
}

DepthDistribution exact_hst(std::span<const DataPoint> sample,
                            const Hyperrectangle& root_rect,
                            const DataPoint& p, std::size_t truncation) {
  if (truncation < 1) throw ParameterError("truncation depth must be >= 1");
  const std::size_t n = validate_points(sample);
  check_point_dims(n, p);
  if (root_rect.dims() != n) {
    throw DimensionError("root rect dimension does not match the sample");
  }
  if (root_rect.closure() != Closure::kHalfOpenRight) {
    throw ParameterError("root rect must be half-open");
  }
  if (!root_rect.contains(p)) {
    throw OutOfDomainError("point " + to_string(p) +
                           " lies outside the root rect " +
                           to_string(root_rect));
  }
  for (const DataPoint& q : sample) {
    if (!root_rect.contains(q)) {
      throw OutOfDomainError("sample point " + to_string(q) +
                             " lies outside the root rect " +
                             to_string(root_rect));
    }
  }

  HstRecursion recursion(sample, p);
  const HalvingKey root_key(n, 0);
  const HstState& root = recursion.root(root_rect);

  DepthDistribution out;
  out.truncation = truncation;
  out.mass.assign(truncation + 1, 0.0);
  if (root.terminal) {
    out.mass[0] = 1.0;
    out.expected = 0.0;
    return out;
  }
  out.expected = recursion.expected(root_key);

  const double inv_n = 1.0 / static_cast<double>(n);
  std::map<HalvingKey, CompensatedSum> live;
  live[root_key].add(1.0);
  CompensatedSum partial_expectation;
  for (std::size_t depth = 1; depth <= truncation && !live.empty(); ++depth) {
    std::map<HalvingKey, CompensatedSum> next;
    CompensatedSum finished;
    for (const auto& [key, acc] : live) {
      const double prob = acc.value();
      const HstState& s = recursion.expand(key);
      const std::size_t inert = n - s.active.size();
      if (inert > 0) next[key].add(prob * inv_n * static_cast<double>(inert));
      for (const HalvingKey& child : s.children) {
        if (recursion.state(child).terminal) {
          finished.add(prob * inv_n);
        } else {
          next[child].add(prob * inv_n);
        }
      }
    }
    out.mass[depth] = finished.value();
    partial_expectation.add(out.mass[depth] * static_cast<double>(depth));
    live = std::move(next);
  }
  CompensatedSum tail;
  for (const auto& [key, acc] : live) tail.add(acc.value());
  out.tail_mass = tail.value();
  out.tail_expectation = out.expected - partial_expectation.value();
  if (out.tail_mass == 0.0) out.tail_expectation = 0.0;
  return out;
}

double negbin_expected(std::size_t k) {
  if (k < 1) throw ParameterError("negative binomial order must be >= 1");
  return 2.0 * static_cast<double>(k);
}

double negbin_mass(std::size_t k, std::size_t n) {
  if (k < 1) throw ParameterError("negative binomial order must be >= 1");
  if (n < k) return 0.0;
  if (n <= 1000) {
    return binomial(n - 1, k - 1) * std::ldexp(1.0, -static_cast<int>(n));
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd) - std::lgamma(kd) - std::lgamma(nd - kd + 1.0) -
                  nd * std::log(2.0));
}

double negbin_partial_expectation(std::size_t k, std::size_t from,
                                  std::size_t to) {
  if (k < 1) throw ParameterError("negative binomial order must be >= 1");
  from = std::max(from, k);
  CompensatedSum acc;
  // Terms decay geometrically; stop once they no longer register.
  for (std::size_t n = from; n <= to && n != std::numeric_limits<std::size_t>::max(); ++n) {
    const double term = negbin_mass(k, n) * static_cast<double>(n);
    acc.add(term);
    if (n > 4 * k + 64 && term < 1e-300) break;
  }
  return acc.value();
}

std::vector<PathStep> trace_path(std::span<const DataPoint> sample,
                                 const DataPoint& p,
                                 std::span<const ScriptedSplit> script) {
  const std::size_t n = validate_points(sample);
  check_point_dims(n, p);
  std::vector<std::size_t> members(sample.size());
  for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;

  std::vector<PathStep> steps;
  steps.reserve(script.size());
  for (std::size_t s = 0; s < script.size(); ++s) {
    const ScriptedSplit& split = script[s];
    const std::string where = "step " + std::to_string(s + 1) + ": ";
    if (members.size() <= 1) {
      throw ScriptError(where + "the point is already isolated");
    }
    const Hyperrectangle start = bounding_box(sample, members);
    if (split.dim >= n) throw ScriptError(where + "dimension out of range");
    std::size_t choices = 0;
    for (std::size_t d = 0; d < n; ++d) {
      if (start[d].lo < start[d].hi) ++choices;
    }
    const Interval& extent = start[split.dim];
    if (!(extent.lo < extent.hi)) {
      throw ScriptError(where + "dimension " + std::to_string(split.dim) +
                        " has no extent in " + to_string(start));
    }
    if (!(split.lo < split.hi) || split.lo < extent.lo || split.hi > extent.hi) {
      throw ScriptError(where + "split range <" + std::to_string(split.lo) +
                        ", " + std::to_string(split.hi) +
                        "> is not a subrange of " + to_string(extent));
    }
    auto inside = [&](double x) { return split.lo < x && x < split.hi; };
    if (inside(p[split.dim])) {
      throw ScriptError(where + "split range straddles the point's coordinate");
    }
    for (std::size_t i : members) {
      if (inside(sample[i][split.dim])) {
        throw ScriptError(where + "split range straddles sample coordinate " +
                          std::to_string(sample[i][split.dim]));
      }
    }
    const bool p_left = p[split.dim] <= split.lo;
    std::vector<std::size_t> child;
    for (std::size_t i : members) {
      if ((sample[i][split.dim] <= split.lo) == p_left) child.push_back(i);
    }

    PathStep step;
    step.start_space = start;
    step.dim = split.dim;
    step.split_range = Interval(split.lo, split.hi, Closure::kClosedBoth);
    step.dimension_choices = choices;
    step.probability = (split.hi - split.lo) /
                       (static_cast<double>(choices) * extent.length());
    step.end_space = bounding_box(sample, child);
    steps.push_back(std::move(step));
    members = std::move(child);
  }
  return steps;
}

MonteCarloResult monte_carlo(std::span<const DataPoint> sample,
                             const DataPoint& p,
                             const MonteCarloOptions& options) {
  if (options.trials < 1) throw ParameterError("trials must be >= 1");
  check_point_dims(validate_points(sample), p);
  if (options.algorithm == Algorithm::kHst && !options.root_rect) {
    throw ParameterError("HST Monte Carlo needs a root rect");
  }

  std::vector<std::uint32_t> depths(options.trials);
  std::vector<std::uint8_t> outside(options.trials, 0);
  detail::parallel_for(options.trials, options.threads, [&](std::size_t i) {
    SeededSource rng(derive_seed(options.seed, i));
    if (options.algorithm == Algorithm::kOriginal) {
      const OriginalTree tree =
          build_original_tree(sample, rng, {.max_depth = options.max_depth});
      depths[i] = static_cast<std::uint32_t>(original_depth(tree, p));
    } else {
      HstBuildOptions opts;
      if (options.max_depth) opts.max_depth = *options.max_depth;
      const HalfSpaceTree tree = build_hst(sample, *options.root_rect, rng, opts);
      const std::optional<std::size_t> d = hst_depth(tree, p);
      outside[i] = d ? 0 : 1;
      depths[i] = static_cast<std::uint32_t>(d.value_or(0));
    }
  });

  __extension__ using u128 = unsigned __int128;
  MonteCarloResult result;
  result.trials = options.trials;
  u128 sum = 0;
  u128 sum_sq = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const std::uint64_t d = depths[i];
    sum += d;
    sum_sq += static_cast<u128>(d) * d;
    if (result.histogram.size() <= d) result.histogram.resize(d + 1, 0);
    ++result.histogram[d];
    result.out_of_domain += outside[i];
  }
  const auto trials = static_cast<u128>(options.trials);
  result.mean = static_cast<double>(sum) / static_cast<double>(options.trials);
  if (options.trials > 1) {
    // N * sum_sq - sum^2 is an exact integer; divide once at the end.
    const u128 numerator = trials * sum_sq - sum * sum;
    const double variance =
        static_cast<double>(numerator) /
        (static_cast<double>(options.trials) *
         static_cast<double>(options.trials - 1));
    result.stderr_mean =
        std::sqrt(variance / static_cast<double>(options.trials));
  }
  return result;
}

}  // namespace novelty
