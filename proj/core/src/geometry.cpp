#include "novelty/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "novelty/errors.hpp"

namespace novelty {
namespace {

std::string format_number(double x) {
  // Shortest representation that round-trips.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

DataPoint::DataPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DimensionError("data point has no coordinates");
  for (std::size_t d = 0; d < coords_.size(); ++d) {
    if (!std::isfinite(coords_[d])) {
      throw DataError("non-finite coordinate in dimension " +
                      std::to_string(d));
    }
  }
}

DataPoint::DataPoint(std::initializer_list<double> coords)
    : DataPoint(std::vector<double>(coords)) {}

std::string to_string(const DataPoint& p) {
  std::string out = "[";
  for (std::size_t d = 0; d < p.dims(); ++d) {
    if (d) out += ",";
    out += format_number(p[d]);
  }
  return out + "]";
}

double project(const DataPoint& p, std::size_t d) {
  if (d >= p.dims()) {
    throw DimensionError("projection onto dimension " + std::to_string(d) +
                         " of a " + std::to_string(p.dims()) +
                         "-dimensional point");
  }
  return p[d];
}

Interval::Interval(double lo_, double hi_, Closure closure_)
    : lo(lo_), hi(hi_), closure(closure_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ParameterError("interval bounds must be finite");
  }
  if (lo > hi) {
    throw ParameterError("interval lower bound " + format_number(lo) +
                         " exceeds upper bound " + format_number(hi));
  }
}

std::string to_string(const Interval& iv) {
  return "<" + format_number(iv.lo) + ", " + format_number(iv.hi) +
         (iv.closure == Closure::kClosedBoth ? ">" : ")");
}

Hyperrectangle::Hyperrectangle(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw DimensionError("hyperrectangle has no dimensions");
  const Closure c = intervals_.front().closure;
  for (const Interval& iv : intervals_) {
    if (iv.closure != c) {
      throw DimensionError("hyperrectangle mixes interval closures");
    }
  }
}

bool Hyperrectangle::contains(const DataPoint& p) const noexcept {
  if (p.dims() != dims()) return false;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!intervals_[d].contains(p[d])) return false;
  }
  return true;
}

bool Hyperrectangle::is_subset_of(const Hyperrectangle& outer) const noexcept {
  if (outer.dims() != dims()) return false;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (intervals_[d].lo < outer[d].lo || intervals_[d].hi > outer[d].hi) {
      return false;
    }
  }
  return true;
}

Hyperrectangle Hyperrectangle::with_interval(std::size_t d, Interval iv) const {
  if (d >= dims()) throw DimensionError("dimension index out of range");
  Hyperrectangle copy = *this;
  copy.intervals_[d] = iv;
  return copy;
}

std::string to_string(const Hyperrectangle& r) {
  std::string out;
  for (std::size_t d = 0; d < r.dims(); ++d) {
    if (d) out += " x ";
    out += to_string(r[d]);
  }
  return out;
}

std::size_t validate_points(std::span<const DataPoint> points) {
  if (points.empty()) throw EmptyInputError("empty point set");
  const std::size_t n = points.front().dims();
  if (n == 0) throw DimensionError("points have no coordinates");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dims() != n) {
      throw DimensionError("point " + std::to_string(i) + " has " +
                           std::to_string(points[i].dims()) +
                           " coordinates, expected " + std::to_string(n));
    }
  }
  return n;
}

Hyperrectangle bounding_box(std::span<const DataPoint> points) {
  const std::size_t n = validate_points(points);
  std::vector<Interval> intervals;
  intervals.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    auto [lo, hi] = std::minmax_element(
        points.begin(), points.end(),
        [d](const DataPoint& a, const DataPoint& b) { return a[d] < b[d]; });
    intervals.emplace_back((*lo)[d], (*hi)[d], Closure::kClosedBoth);
  }
  return Hyperrectangle(std::move(intervals));
}

Hyperrectangle bounding_box(std::span<const DataPoint> points,
                            std::span<const std::size_t> subset) {
  if (subset.empty()) throw EmptyInputError("empty point subset");
  const std::size_t n = points[subset.front()].dims();
  std::vector<Interval> intervals;
  intervals.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    double lo = points[subset.front()][d];
    double hi = lo;
    for (std::size_t i : subset) {
      lo = std::min(lo, points[i][d]);
      hi = std::max(hi, points[i][d]);
    }
    intervals.emplace_back(lo, hi, Closure::kClosedBoth);
  }
  return Hyperrectangle(std::move(intervals));
}

bool can_midpoint_split(const Hyperrectangle& r, std::size_t d) noexcept {
  if (d >= r.dims()) return false;
  const Interval& iv = r[d];
  if (iv.closure != Closure::kHalfOpenRight || !(iv.lo < iv.hi)) return false;
  const double mid = (iv.lo + iv.hi) / 2.0;
  return iv.lo < mid && mid < iv.hi;
}

std::pair<Hyperrectangle, Hyperrectangle> midpoint_split(
    const Hyperrectangle& r, std::size_t d) {
  if (d >= r.dims()) throw DimensionError("split dimension out of range");
  if (r.closure() != Closure::kHalfOpenRight) {
    throw DegenerateSplitError("midpoint splits need a half-open box");
  }
  const Interval& iv = r[d];
  if (!(iv.lo < iv.hi)) {
    throw DegenerateSplitError("empty interval " + to_string(iv) +
                               " in dimension " + std::to_string(d));
  }
  const double s = (iv.lo + iv.hi) / 2.0;
  if (!(iv.lo < s && s < iv.hi)) {
    throw DegenerateSplitError("interval " + to_string(iv) +
                               " is too narrow to halve");
  }
  return {r.with_interval(d, Interval(iv.lo, s, Closure::kHalfOpenRight)),
          r.with_interval(d, Interval(s, iv.hi, Closure::kHalfOpenRight))};
}

}  // namespace novelty
