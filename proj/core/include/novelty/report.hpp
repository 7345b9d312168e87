#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "novelty/depth_analysis.hpp"

namespace novelty {

enum class TableFormat { kTsv, kMarkdown };

TableFormat parse_table_format(std::string_view name);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;  // rendered as '#' lines (TSV) or a footer
};

std::string render(const Table& table, TableFormat format);

// Drops trailing zeros: 6.820 -> 6.82, 3.000 -> 3.
std::string format_fixed(double x, int decimals);
std::string format_sci(double x, int digits = 10);

// One row per depth 0..truncation with a nonzero mass, then the tail.
Table distribution_table(const DepthDistribution& dist);
Table trace_table(const std::vector<PathStep>& steps);
Table monte_carlo_table(const MonteCarloResult& result);

namespace reference {

// The reference tables, recomputed from the built-in fixtures.
Table t1_table();
Table original_probs_table();
Table hst_probs_table(const Hyperrectangle& root);
Table expected_table(const Hyperrectangle& root);

}  // namespace reference

}  // namespace novelty
