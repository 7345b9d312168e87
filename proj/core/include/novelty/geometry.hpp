#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace novelty {

// An n-dimensional observation. Coordinates are finite doubles.
class DataPoint {
 public:
  DataPoint() = default;
  // Throws DataError on non-finite coordinates, DimensionError when empty.
  explicit DataPoint(std::vector<double> coords);
  DataPoint(std::initializer_list<double> coords);

  std::size_t dims() const noexcept { return coords_.size(); }
  double operator[](std::size_t d) const noexcept { return coords_[d]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const DataPoint&, const DataPoint&) = default;

 private:
  std::vector<double> coords_;
};

std::string to_string(const DataPoint& p);

// pi_d(p). Throws DimensionError when d is out of range.
double project(const DataPoint& p, std::size_t d);

enum class Closure {
  kClosedBoth,     // <lo, hi>
  kHalfOpenRight,  // <lo, hi)
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  Closure closure = Closure::kClosedBoth;

  Interval() = default;
  // Throws ParameterError unless lo <= hi and both are finite.
  Interval(double lo, double hi, Closure closure = Closure::kClosedBoth);

  bool contains(double x) const noexcept {
    return closure == Closure::kClosedBoth ? (lo <= x && x <= hi)
                                           : (lo <= x && x < hi);
  }
  bool empty() const noexcept {
    return closure == Closure::kHalfOpenRight && !(lo < hi);
  }
  double length() const noexcept { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

class Hyperrectangle {
 public:
  Hyperrectangle() = default;
  // Throws DimensionError when empty or when closures are mixed.
  explicit Hyperrectangle(std::vector<Interval> intervals);

  std::size_t dims() const noexcept { return intervals_.size(); }
  const Interval& operator[](std::size_t d) const noexcept {
    return intervals_[d];
  }
  std::span<const Interval> intervals() const noexcept { return intervals_; }
  Closure closure() const noexcept { return intervals_.front().closure; }

  // False on dimension mismatch.
  bool contains(const DataPoint& p) const noexcept;
  // Every interval of *this lies inside the matching interval of outer.
  bool is_subset_of(const Hyperrectangle& outer) const noexcept;

  Hyperrectangle with_interval(std::size_t d, Interval iv) const;

  friend bool operator==(const Hyperrectangle&,
                         const Hyperrectangle&) = default;

 private:
  std::vector<Interval> intervals_;
};

std::string to_string(const Hyperrectangle& r);

// Tight closed box R(Z) around a nonempty point set.
Hyperrectangle bounding_box(std::span<const DataPoint> points);
// Same, over a subset of `points` given by index.
Hyperrectangle bounding_box(std::span<const DataPoint> points,
                            std::span<const std::size_t> subset);

// Halves interval d of a half-open box at s = (x + y) / 2 into <x, s) and
// <s, y). Throws DegenerateSplitError when the interval is empty or too
// narrow to have a representable midpoint strictly inside it.
std::pair<Hyperrectangle, Hyperrectangle> midpoint_split(
    const Hyperrectangle& r, std::size_t d);

// True when midpoint_split(r, d) would succeed.
bool can_midpoint_split(const Hyperrectangle& r, std::size_t d) noexcept;

// Checks that all points are finite and share one dimension; returns it.
// Throws EmptyInputError, DimensionError.
std::size_t validate_points(std::span<const DataPoint> points);

}  // namespace novelty
