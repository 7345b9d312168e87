#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <random>
#include <span>

namespace novelty {

// splitmix64 output finalizer.
std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

// Per-tree (or per-trial) seed derived from a master seed:
//   splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15)
// The string below is written into model files so replays are portable.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;
inline constexpr const char* kSeedMixingName =
    "splitmix64_mix(seed + (index + 1) * 0x9E3779B97F4A7C15)";

// The randomness consumed by tree construction. Builders only ever ask for
// these three kinds of draws, which lets fixtures script them exactly.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // One element of `candidates`, uniformly. `candidates` is nonempty.
  virtual std::size_t choose_dimension(
      std::span<const std::size_t> candidates) = 0;
  // Uniform over the open interval (lo, hi), lo < hi.
  virtual double split_point(double lo, double hi) = 0;
  // Uniform over {0, ..., n - 1}, n > 0. Used for subsampling.
  virtual std::size_t uniform_index(std::size_t n) = 0;
};

// mt19937_64 with portable integer -> real/index conversions (the standard
// distributions are implementation-defined, the engine is not).
class SeededSource final : public RandomSource {
 public:
  explicit SeededSource(std::uint64_t seed) : engine_(seed) {}

  std::size_t choose_dimension(std::span<const std::size_t> candidates) override;
  double split_point(double lo, double hi) override;
  std::size_t uniform_index(std::size_t n) override;

  // Uniform in the open unit interval (0, 1) with 53 random bits.
  double next_unit();

 private:
  std::mt19937_64 engine_;
};

// Replays queued decisions, then defers to a fallback (if any).
//
// A queued dimension must be one of the candidates offered at that draw;
// a queued threshold is returned verbatim and may sit on a data coordinate.
class ScriptedSource final : public RandomSource {
 public:
  struct Step {
    std::size_t dim = 0;
    std::optional<double> threshold;  // absent for midpoint (HST) splits
  };

  explicit ScriptedSource(std::deque<Step> steps,
                          std::unique_ptr<RandomSource> fallback = nullptr)
      : steps_(std::move(steps)), fallback_(std::move(fallback)) {}

  std::size_t choose_dimension(std::span<const std::size_t> candidates) override;
  double split_point(double lo, double hi) override;
  std::size_t uniform_index(std::size_t n) override;

  std::size_t remaining() const noexcept { return steps_.size(); }

 private:
  std::deque<Step> steps_;
  std::optional<double> pending_threshold_;
  bool pending_ = false;
  std::unique_ptr<RandomSource> fallback_;
};

}  // namespace novelty
