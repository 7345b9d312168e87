#include "novelty/reference_data.hpp"

namespace novelty::reference {

std::vector<DataPoint> sample() {
  return {{25, 100}, {30, 90}, {20, 90}, {35, 85},  {25, 85},  {15, 85},
          {105, 20}, {95, 25}, {95, 15}, {90, 30}, {90, 20}, {90, 10}};
}

std::vector<DataPoint> table_points() {
  return {{25, 100}, {20, 90}, {30, 90}, {35, 85}, {25, 85}, {15, 85}};
}

DataPoint novelty_point() { return {25, 20}; }

DataPoint tabulated_novelty_point() { return {20, 25}; }

Hyperrectangle example_root_rect() {
  return Hyperrectangle({Interval(0, 110, Closure::kHalfOpenRight),
                         Interval(-5, 105, Closure::kHalfOpenRight)});
}

Hyperrectangle analysis_root_rect() {
  return Hyperrectangle({Interval(-10, 125, Closure::kHalfOpenRight),
                         Interval(-5, 105, Closure::kHalfOpenRight)});
}

std::vector<ScriptedSplit> trace_script() {
  return {{0, 95, 105}, {0, 90, 95}, {1, 85, 90}, {1, 10, 20},
          {0, 35, 90},  {0, 25, 35}, {0, 15, 25}};
}

std::unique_ptr<RandomSource> original_example_source() {
  using Step = ScriptedSource::Step;
  std::deque<Step> steps = {
      {1, 72.63}, {0, 103.08}, {0, 20.32},               // levels 0-1
      {0, 92},    {0, 17},     {0, 27},                  // level 2
      {1, 25},    {1, 20},     {1, 90},     {0, 32},     // level 3
      {1, 15},                                           // level 4
  };
  return std::make_unique<ScriptedSource>(std::move(steps));
}

std::unique_ptr<RandomSource> hst_example_source(std::uint64_t fallback_seed) {
  using Step = ScriptedSource::Step;
  std::deque<Step> steps = {
      {0, {}},                                  // R
      {1, {}}, {0, {}},                         // R_l, R_r
      {0, {}}, {1, {}},                         // R_lr, R_rr
      {1, {}}, {1, {}}, {0, {}},                // R_lrl, R_lrr, R_rrl
  };
  return std::make_unique<ScriptedSource>(
      std::move(steps), std::make_unique<SeededSource>(fallback_seed));
}

}  // namespace novelty::reference
