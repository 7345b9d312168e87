#include "novelty/random.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "novelty/errors.hpp"

namespace novelty {

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

double SeededSource::next_unit() {
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

std::size_t SeededSource::uniform_index(std::size_t n) {
  if (n == 0) throw ParameterError("uniform_index over an empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t range = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

std::size_t SeededSource::choose_dimension(
    std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw ParameterError("no candidate dimensions");
  return candidates[uniform_index(candidates.size())];
}

double SeededSource::split_point(double lo, double hi) {
  if (!(lo < hi)) throw ParameterError("split range must have lo < hi");
  for (;;) {
    const double z = lo + next_unit() * (hi - lo);
    if (lo < z && z < hi) return z;
  }
}

std::size_t ScriptedSource::choose_dimension(
    std::span<const std::size_t> candidates) {
  if (steps_.empty()) {
    if (!fallback_) throw ScriptError("scripted random source exhausted");
    return fallback_->choose_dimension(candidates);
  }
  Step step = steps_.front();
  steps_.pop_front();
  if (std::find(candidates.begin(), candidates.end(), step.dim) ==
      candidates.end()) {
    throw ScriptError("scripted dimension " + std::to_string(step.dim) +
                      " is not selectable at this node");
  }
  pending_ = true;
  pending_threshold_ = step.threshold;
  return step.dim;
}

double ScriptedSource::split_point(double lo, double hi) {
  if (pending_) {
    pending_ = false;
    if (!pending_threshold_) {
      throw ScriptError("scripted step has no threshold");
    }
    const double z = *pending_threshold_;
    if (z < lo || z > hi) {
      throw ScriptError("scripted threshold " + std::to_string(z) +
                        " lies outside the node extent");
    }
    return z;
  }
  if (!fallback_) throw ScriptError("scripted random source exhausted");
  return fallback_->split_point(lo, hi);
}

std::size_t ScriptedSource::uniform_index(std::size_t n) {
  if (!fallback_) throw ScriptError("scripted source cannot subsample");
  return fallback_->uniform_index(n);
}

}  // namespace novelty
