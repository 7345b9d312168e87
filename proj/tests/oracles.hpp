#pragma once

// Reference implementations used only as test oracles. They are deliberately
// naive: no memoisation, no state compression, exponential running time.

#include <algorithm>
#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include "novelty/geometry.hpp"

namespace oracle {

using novelty::DataPoint;

struct Cell {
  std::vector<double> lo, hi;
};

// HST depth masses by walking every dimension sequence of length <= max_len.
// Each sequence step has probability 1/n; a branch stops once p's cell holds
// at most one sample point. Returns mass[0..max_len].
inline void hst_walk(const std::vector<DataPoint>& sample, const DataPoint& p,
                     Cell cell, std::size_t depth, double weight,
                     std::size_t max_len, std::vector<double>& mass) {
  std::size_t inside = 0;
  for (const DataPoint& q : sample) {
    bool in = true;
    for (std::size_t d = 0; d < q.dims(); ++d) {
      if (!(cell.lo[d] <= q[d] && q[d] < cell.hi[d])) in = false;
    }
    inside += in;
  }
  if (inside <= 1) {
    mass[depth] += weight;
    return;
  }
  if (depth == max_len) return;
  const std::size_t n = p.dims();
  for (std::size_t d = 0; d < n; ++d) {
    Cell child = cell;
    const double s = (cell.lo[d] + cell.hi[d]) / 2;
    if (p[d] < s) child.hi[d] = s;
    else child.lo[d] = s;
    hst_walk(sample, p, child, depth + 1, weight / static_cast<double>(n),
             max_len, mass);
  }
}

inline std::vector<double> hst_masses(const std::vector<DataPoint>& sample,
                                      const DataPoint& p,
                                      const std::vector<double>& root_lo,
                                      const std::vector<double>& root_hi,
                                      std::size_t max_len) {
  std::vector<double> mass(max_len + 1, 0.0);
  hst_walk(sample, p, Cell{root_lo, root_hi}, 0, 1.0, max_len, mass);
  return mass;
}

// Original-tree depth masses by enumerating every (dimension, threshold
// interval) choice without memoisation. Thresholds are uniform on the node
// extent; each interval between consecutive distinct breakpoints (sample
// projections plus p's own coordinate) sends p and the sample the same way.
inline void original_walk(const std::vector<DataPoint>& members,
                          const DataPoint& p, std::size_t depth, double weight,
                          std::size_t max_depth, std::vector<double>& mass) {
  if (members.size() <= 1) {
    mass[depth] += weight;
    return;
  }
  const std::size_t n = p.dims();
  std::vector<std::size_t> dims;
  for (std::size_t d = 0; d < n; ++d) {
    auto [lo, hi] = std::minmax_element(
        members.begin(), members.end(),
        [d](const DataPoint& a, const DataPoint& b) { return a[d] < b[d]; });
    if ((*lo)[d] < (*hi)[d]) dims.push_back(d);
  }
  if (dims.empty()) {  // duplicates: leaf
    mass[depth] += weight;
    return;
  }
  if (depth == max_depth) return;
  for (std::size_t d : dims) {
    std::set<double> cuts;
    for (const DataPoint& q : members) cuts.insert(q[d]);
    const double lo = *cuts.begin();
    const double hi = *cuts.rbegin();
    if (lo < p[d] && p[d] < hi) cuts.insert(p[d]);
    std::vector<double> v(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double a = v[i], b = v[i + 1];
      const double prob = (b - a) / (hi - lo) / static_cast<double>(dims.size());
      const double z = (a + b) / 2;  // any threshold inside (a, b)
      std::vector<DataPoint> side;
      const bool p_left = p[d] <= z;
      for (const DataPoint& q : members) {
        if ((q[d] <= z) == p_left) side.push_back(q);
      }
      original_walk(side, p, depth + 1, weight * prob, max_depth, mass);
    }
  }
}

inline std::vector<double> original_masses(const std::vector<DataPoint>& sample,
                                           const DataPoint& p,
                                           std::size_t max_depth) {
  std::vector<double> mass(max_depth + 1, 0.0);
  original_walk(sample, p, 0, 1.0, max_depth, mass);
  return mass;
}

// Distinct points on a small integer grid so that ties and shared
// coordinates show up regularly. `count` is capped at the grid size.
inline std::vector<DataPoint> random_grid_sample(std::mt19937_64& rng,
                                                 std::size_t count,
                                                 std::size_t dims, int grid) {
  double cells = 1.0;
  for (std::size_t d = 0; d < dims; ++d) cells *= grid + 1;
  count = std::min(count, static_cast<std::size_t>(cells));
  std::uniform_int_distribution<int> coord(0, grid);
  std::vector<DataPoint> out;
  while (out.size() < count) {
    std::vector<double> c(dims);
    for (double& x : c) x = coord(rng);
    DataPoint q(std::move(c));
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  return out;
}

}  // namespace oracle

namespace oracle {

// Probability that the original recursion takes exactly the given sequence
// of (dimension, threshold range) choices on p's side, rebuilt from the
// member sets rather than from bounding boxes.
struct Choice {
  std::size_t dim;
  double lo, hi;
};

inline double path_mass(std::vector<DataPoint> members, const DataPoint& p,
                        const std::vector<Choice>& choices) {
  double mass = 1.0;
  for (const Choice& c : choices) {
    std::size_t active = 0;
    for (std::size_t d = 0; d < p.dims(); ++d) {
      auto [lo, hi] = std::minmax_element(
          members.begin(), members.end(),
          [d](const DataPoint& a, const DataPoint& b) { return a[d] < b[d]; });
      active += (*lo)[d] < (*hi)[d];
    }
    double lo = members.front()[c.dim], hi = lo;
    for (const DataPoint& q : members) {
      lo = std::min(lo, q[c.dim]);
      hi = std::max(hi, q[c.dim]);
    }
    mass *= (c.hi - c.lo) / (hi - lo) / static_cast<double>(active);
    const double z = (c.lo + c.hi) / 2;
    std::vector<DataPoint> side;
    for (const DataPoint& q : members) {
      if ((q[c.dim] <= z) == (p[c.dim] <= z)) side.push_back(q);
    }
    members = std::move(side);
  }
  return members.size() <= 1 ? mass : 0.0;
}

}  // namespace oracle
