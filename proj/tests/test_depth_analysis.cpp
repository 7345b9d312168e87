#include "doctest.h"

#include <cmath>
#include <random>

#include "novelty/depth_analysis.hpp"
#include "novelty/errors.hpp"
#include "novelty/reference_data.hpp"
#include "oracles.hpp"

using namespace novelty;

namespace {

// Mirror image that maps the two-cluster sample onto itself.
DataPoint mirror(const DataPoint& p) { return {p[1] + 5, p[0] - 5}; }

std::vector<double> lo_of(const Hyperrectangle& r) {
  std::vector<double> v;
  for (const Interval& iv : r.intervals()) v.push_back(iv.lo);
  return v;
}

std::vector<double> hi_of(const Hyperrectangle& r) {
  std::vector<double> v;
  for (const Interval& iv : r.intervals()) v.push_back(iv.hi);
  return v;
}

}  // namespace

TEST_CASE("original distribution matches naive enumeration") {
  std::mt19937_64 gen(21);
  for (int round = 0; round < 40; ++round) {
    const auto s = oracle::random_grid_sample(gen, 2 + round % 5, 1 + round % 3, 8);
    std::vector<DataPoint> queries(s.begin(), s.end());
    queries.push_back(DataPoint(std::vector<double>(s.front().dims(), 3.5)));
    for (const DataPoint& p : queries) {
      const DepthDistribution d = exact_original(s, p);
      const auto naive = oracle::original_masses(s, p, s.size());
      double expected = 0.0;
      for (std::size_t k = 0; k < naive.size(); ++k) {
        CHECK(d.at(k) == doctest::Approx(naive[k]).epsilon(1e-12));
        expected += static_cast<double>(k) * naive[k];
      }
      CHECK(d.expected == doctest::Approx(expected).epsilon(1e-12));
      CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("original distribution on the reference sample") {
  const auto s = reference::sample();
  const DepthDistribution top = exact_original(s, DataPoint{25, 100});
  CHECK(std::abs(top.expected - 3.32616229) < 1e-8);
  CHECK(top.at(1) == doctest::Approx(1.0 / 18).epsilon(1e-12));
  CHECK(top.at(0) == 0.0);
  CHECK(std::abs(top.total() - 1.0) < 1e-12);
  // One cut separates whole clusters or an extreme point; [35,85] is neither.
  CHECK(exact_original(s, DataPoint{35, 85}).at(1) == 0.0);
}

TEST_CASE("mirror symmetry leaves original distributions unchanged") {
  const auto s = reference::sample();
  for (const DataPoint& p : reference::table_points()) {
    const DataPoint q = mirror(p);
    CHECK(std::find(s.begin(), s.end(), q) != s.end());
    const DepthDistribution a = exact_original(s, p);
    const DepthDistribution b = exact_original(s, q);
    CHECK(a.expected == doctest::Approx(b.expected).epsilon(1e-12));
    for (std::size_t k = 0; k < 16; ++k) {
      CHECK(a.at(k) == doctest::Approx(b.at(k)).epsilon(1e-12));
    }
  }
  CHECK(mirror(reference::novelty_point()) == reference::novelty_point());
}

TEST_CASE("novelty routing variants") {
  const auto s = reference::sample();
  const DataPoint tab = reference::tabulated_novelty_point();
  const double exact = exact_original(s, tab).expected;
  const double gap = exact_original(s, tab, kDefaultTruncation,
                                    NoveltyRouting::kGapMidpoint).expected;
  CHECK(std::abs(gap - 4.27789495) < 1e-8);
  CHECK(exact != doctest::Approx(gap).epsilon(1e-6));
  // Training points never sit strictly inside a gap, so routing is moot.
  for (const DataPoint& p : reference::table_points()) {
    CHECK(exact_original(s, p).expected ==
          exact_original(s, p, kDefaultTruncation, NoveltyRouting::kGapMidpoint).expected);
  }
}

TEST_CASE("original argument validation") {
  const std::vector<DataPoint> one{{1, 1}};
  CHECK_THROWS_AS(exact_original(one, DataPoint{1, 1}), ParameterError);
  CHECK_THROWS_AS(exact_original(reference::sample(), DataPoint{1, 1}, 0), ParameterError);
  CHECK_THROWS_AS(exact_original(reference::sample(), DataPoint{1}), DimensionError);
}

TEST_CASE("HST distribution matches brute-force sequence enumeration") {
  const auto s = reference::sample();
  for (const Hyperrectangle& root :
       {reference::example_root_rect(), reference::analysis_root_rect()}) {
    auto points = reference::table_points();
    points.push_back(reference::novelty_point());
    points.push_back(DataPoint{95, 25});
    for (const DataPoint& p : points) {
      constexpr std::size_t kLen = 16;
      const auto naive = oracle::hst_masses(s, p, lo_of(root), hi_of(root), kLen);
      const DepthDistribution d = exact_hst(s, root, p);
      for (std::size_t k = 0; k <= kLen; ++k) {
        CHECK(d.at(k) == doctest::Approx(naive[k]).epsilon(1e-13));
      }
      CHECK(std::abs(d.total() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("HST closed forms on the example root") {
  const auto s = reference::sample();
  const Hyperrectangle root = reference::example_root_rect();
  const DepthDistribution top = exact_hst(s, root, DataPoint{25, 100});
  CHECK(top.expected == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(top.at(3) == doctest::Approx(1.0 / 8).epsilon(1e-14));
  CHECK(top.at(4) == doctest::Approx(3.0 / 16).epsilon(1e-14));
  // Three successes needed: negative binomial with k = 3.
  for (std::size_t n = 3; n < 20; ++n) {
    CHECK(top.at(n) == doctest::Approx(negbin_mass(3, n)).epsilon(1e-12));
  }
  const DepthDistribution nov = exact_hst(s, root, reference::novelty_point());
  CHECK(nov.expected == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(nov.at(2) == 0.5);
  CHECK(nov.at(3) == 0.25);
}

TEST_CASE("random HST samples agree with brute force") {
  std::mt19937_64 gen(8);
  for (int round = 0; round < 30; ++round) {
    const auto s = oracle::random_grid_sample(gen, 2 + round % 6, 1 + round % 3, 15);
    const Hyperrectangle root(std::vector<Interval>(
        s.front().dims(), Interval(0, 16, Closure::kHalfOpenRight)));
    const DataPoint& p = s[round % s.size()];
    const auto naive = oracle::hst_masses(s, p, lo_of(root), hi_of(root), 12);
    const DepthDistribution d = exact_hst(s, root, p);
    for (std::size_t k = 0; k <= 12; ++k) {
      CHECK(d.at(k) == doctest::Approx(naive[k]).epsilon(1e-13));
    }
  }
}

TEST_CASE("HST error cases") {
  const auto s = reference::sample();
  const Hyperrectangle root = reference::example_root_rect();
  CHECK_THROWS_AS(exact_hst(s, root, DataPoint{-1, 0}), OutOfDomainError);
  const std::vector<DataPoint> twins{{3, 3}, {3, 3}};
  CHECK_THROWS_AS(exact_hst(twins, root, DataPoint{3, 3}), InfiniteDepthError);
  const std::vector<DataPoint> single{{3, 3}};
  const DepthDistribution d = exact_hst(single, root, DataPoint{3, 3});
  CHECK(d.at(0) == 1.0);
  CHECK(d.expected == 0.0);
}

TEST_CASE("truncation keeps the expectation exact") {
  const auto s = reference::sample();
  const DepthDistribution full = exact_hst(s, reference::analysis_root_rect(), DataPoint{25, 85});
  const DepthDistribution cut = exact_hst(s, reference::analysis_root_rect(), DataPoint{25, 85}, 9);
  CHECK(cut.mass.size() == 10);
  CHECK(cut.expected == doctest::Approx(full.expected).epsilon(1e-12));
  CHECK(cut.total() == doctest::Approx(1.0).epsilon(1e-12));
  double tail = 0.0;
  for (std::size_t k = 10; k < full.mass.size(); ++k) tail += full.mass[k];
  CHECK(cut.tail_mass == doctest::Approx(tail + full.tail_mass).epsilon(1e-10));
}

TEST_CASE("negative binomial helpers") {
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(negbin_expected(k) == 2.0 * k);
    double total = 0.0, mean = 0.0;
    for (std::size_t n = k; n < 200; ++n) {
      total += negbin_mass(k, n);
      mean += static_cast<double>(n) * negbin_mass(k, n);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(2.0 * k).epsilon(1e-10));
    CHECK(negbin_partial_expectation(k, k, 199) == doctest::Approx(mean).epsilon(1e-12));
  }
  CHECK(negbin_mass(3, 2) == 0.0);
  CHECK(negbin_mass(3, 4) == doctest::Approx(3.0 / 16));
  CHECK(negbin_mass(2, 5000) >= 0.0);
}

TEST_CASE("path trace of the worked example") {
  const auto s = reference::sample();
  const auto script = reference::trace_script();
  const auto steps = trace_path(s, DataPoint{25, 85}, script);
  REQUIRE(steps.size() == 7);
  const double expected[] = {1.0 / 18, 1.0 / 32, 1.0 / 36, 1.0 / 15, 11.0 / 30, 0.5, 1.0};
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(steps[i].probability == doctest::Approx(expected[i]).epsilon(1e-14));
  }
  CHECK(steps[0].start_space == Hyperrectangle({Interval(15, 105), Interval(10, 100)}));
  CHECK(steps[4].end_space == Hyperrectangle({Interval(15, 35), Interval(85, 85)}));
  CHECK(steps[5].dimension_choices == 1);
  CHECK(steps[6].end_space == Hyperrectangle({Interval(25, 25), Interval(85, 85)}));
}

TEST_CASE("path trace probability equals the recursion's mass for that path") {
  const auto s = reference::sample();
  const auto script = reference::trace_script();
  const auto steps = trace_path(s, DataPoint{25, 85}, script);
  double product = 1.0;
  for (const PathStep& st : steps) product *= st.probability;
  std::vector<oracle::Choice> choices;
  for (const ScriptedSplit& sp : script) choices.push_back({sp.dim, sp.lo, sp.hi});
  const double mass = oracle::path_mass(s, DataPoint{25, 85}, choices);
  CHECK(product == doctest::Approx(mass).epsilon(1e-14));
  CHECK(product == doctest::Approx(1.0 / 18 / 32 / 36 / 15 * 11 / 30 / 2).epsilon(1e-14));
  // One path among many ending at depth 7.
  CHECK(product < exact_original(s, DataPoint{25, 85}).at(7));
}

TEST_CASE("path trace rejects inconsistent scripts") {
  const auto s = reference::sample();
  const std::vector<ScriptedSplit> straddle{{0, 20, 30}};
  CHECK_THROWS_AS(trace_path(s, DataPoint{25, 85}, straddle), ScriptError);
  const std::vector<ScriptedSplit> outside{{0, 0, 10}};
  CHECK_THROWS_AS(trace_path(s, DataPoint{25, 85}, outside), ScriptError);
  auto longer = reference::trace_script();
  longer.push_back({0, 15, 25});
  CHECK_THROWS_AS(trace_path(s, DataPoint{25, 85}, longer), ScriptError);
}

TEST_CASE("Monte Carlo is deterministic and thread independent") {
  const auto s = reference::sample();
  MonteCarloOptions opts;
  opts.trials = 2000;
  opts.seed = 12;
  const MonteCarloResult a = monte_carlo(s, DataPoint{25, 100}, opts);
  opts.threads = 4;
  const MonteCarloResult b = monte_carlo(s, DataPoint{25, 100}, opts);
  CHECK(a.mean == b.mean);
  CHECK(a.histogram == b.histogram);
  REQUIRE(a.stderr_mean.has_value());
  CHECK(std::abs(a.mean - 3.32616229) < 4 * *a.stderr_mean);

  opts.algorithm = Algorithm::kHst;
  CHECK_THROWS_AS(monte_carlo(s, DataPoint{25, 100}, opts), ParameterError);
  opts.root_rect = reference::example_root_rect();
  opts.trials = 1;
  CHECK_FALSE(monte_carlo(s, DataPoint{25, 100}, opts).stderr_mean.has_value());
}
