#include "novelty/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "novelty/errors.hpp"
#include "novelty/reference_data.hpp"

namespace novelty {

TableFormat parse_table_format(std::string_view name) {
  if (name == "tsv") return TableFormat::kTsv;
  if (name == "markdown" || name == "md") return TableFormat::kMarkdown;
  throw ParameterError("unknown table format '" + std::string(name) + "'");
}

std::string render(const Table& table, TableFormat format) {
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& cells) {
    if (format == TableFormat::kTsv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "\t" : "") << cells[i];
      }
      out << '\n';
    } else {
      out << '|';
      for (const std::string& c : cells) out << ' ' << c << " |";
      out << '\n';
    }
  };

  row(table.header);
  if (format == TableFormat::kMarkdown) {
    out << '|';
    for (std::size_t i = 0; i < table.header.size(); ++i) out << " --- |";
    out << '\n';
  }
  for (const auto& r : table.rows) row(r);
  for (const std::string& note : table.notes) {
    out << (format == TableFormat::kTsv ? "# " : "\n> ") << note << '\n';
  }
  return out.str();
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string format_sci(double x, int digits) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*E", digits, x);
  return buf;
}

Table distribution_table(const DepthDistribution& dist) {
  Table t{{"depth", "probability"}, {}, {}};
  for (std::size_t k = 0; k < dist.mass.size(); ++k) {
    if (dist.mass[k] == 0.0) continue;
    t.rows.push_back({std::to_string(k), format_sci(dist.mass[k])});
  }
  t.rows.push_back({">" + std::to_string(dist.truncation),
                    format_sci(dist.tail_mass)});
  t.notes.push_back("expected depth " + format_fixed(dist.expected, 10));
  return t;
}

namespace {

std::string dim_name(std::size_t d) {
  if (d == 0) return "x";
  if (d == 1) return "y";
  return "x" + std::to_string(d);
}

}  // namespace

Table trace_table(const std::vector<PathStep>& steps) {
  Table t{{"start space", "dim", "split range", "probability", "end space"},
          {},
          {}};
  double product = 1.0;
  for (const PathStep& s : steps) {
    t.rows.push_back({to_string(s.start_space), dim_name(s.dim),
                      to_string(s.split_range), format_fixed(s.probability, 10),
                      to_string(s.end_space)});
    product *= s.probability;
  }
  t.notes.push_back("path probability " + format_sci(product));
  return t;
}

Table monte_carlo_table(const MonteCarloResult& result) {
  Table t{{"depth", "trials", "frequency"}, {}, {}};
  const double n = static_cast<double>(result.trials);
  for (std::size_t k = 0; k < result.histogram.size(); ++k) {
    if (result.histogram[k] == 0) continue;
    t.rows.push_back({std::to_string(k), std::to_string(result.histogram[k]),
                      format_sci(static_cast<double>(result.histogram[k]) / n)});
  }
  t.notes.push_back("trials " + std::to_string(result.trials));
  t.notes.push_back("mean " + format_fixed(result.mean, 8));
  t.notes.push_back("stderr " + (result.stderr_mean
                                     ? format_fixed(*result.stderr_mean, 8)
                                     : std::string("n/a")));
  if (result.out_of_domain > 0) {
    t.notes.push_back("out_of_domain " + std::to_string(result.out_of_domain));
  }
  return t;
}

namespace reference {

namespace {

std::string label(const DataPoint& p) { return to_string(p); }

}  // namespace

Table t1_table() {
  const auto s = sample();
  const auto script = trace_script();
  return trace_table(trace_path(s, DataPoint{25, 85}, script));
}

Table original_probs_table() {
  constexpr std::size_t kDepths = 11;
  Table t;
  t.header.push_back("point");
  for (std::size_t k = 1; k <= kDepths; ++k) t.header.push_back(std::to_string(k));

  const auto s = sample();
  auto add = [&](const DataPoint& p, NoveltyRouting routing) {
    const DepthDistribution d = exact_original(s, p, kDefaultTruncation, routing);
    std::vector<std::string> r{label(p)};
    for (std::size_t k = 1; k <= kDepths; ++k) r.push_back(format_sci(d.at(k)));
    t.rows.push_back(std::move(r));
  };
  for (const DataPoint& p : table_points()) add(p, NoveltyRouting::kExact);
  add(tabulated_novelty_point(), NoveltyRouting::kGapMidpoint);
  t.notes.push_back(
      "last row routes the query through each threshold gap by the gap "
      "midpoint");
  return t;
}

Table hst_probs_table(const Hyperrectangle& root) {
  constexpr std::size_t kDepths = 10;
  Table t;
  t.header.push_back("point");
  for (std::size_t k = 1; k <= kDepths; ++k) t.header.push_back(std::to_string(k));
  t.header.push_back(">" + std::to_string(kDepths));

  const auto s = sample();
  auto points = table_points();
  points.push_back(novelty_point());
  for (const DataPoint& p : points) {
    const DepthDistribution d = exact_hst(s, root, p);
    std::vector<std::string> r{label(p)};
    double head = d.at(0);
    for (std::size_t k = 1; k <= kDepths; ++k) {
      r.push_back(format_sci(d.at(k), 4));
      head += d.at(k);
    }
    r.push_back(format_sci(std::max(0.0, 1.0 - head), 4));
    t.rows.push_back(std::move(r));
  }
  t.notes.push_back("root " + to_string(root));
  return t;
}

Table expected_table(const Hyperrectangle& root) {
  Table t{{"point", "original", "hst"}, {}, {}};
  const auto s = sample();
  for (const DataPoint& p : table_points()) {
    t.rows.push_back({label(p), format_fixed(exact_original(s, p).expected, 8),
                      format_fixed(exact_hst(s, root, p).expected, 3)});
  }
  const DataPoint tab = tabulated_novelty_point();
  const DataPoint nov = novelty_point();
  t.rows.push_back(
      {label(tab) + " / " + label(nov),
       format_fixed(
           exact_original(s, tab, kDefaultTruncation, NoveltyRouting::kGapMidpoint)
               .expected,
           8),
       format_fixed(exact_hst(s, root, nov).expected, 3)});
  t.notes.push_back("novelty row: original column is " + label(tab) +
                    " with gap-midpoint routing, hst column is " + label(nov));
  t.notes.push_back("root " + to_string(root));
  return t;
}

}  // namespace reference

}  // namespace novelty
