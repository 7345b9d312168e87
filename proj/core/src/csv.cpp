#include "novelty/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "novelty/errors.hpp"

namespace novelty {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Reads one record, honouring quotes that span line breaks. Returns false at
// end of input. `lines` counts physical lines consumed.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields,
                 std::size_t& lines, std::size_t row) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++lines;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        field += '\n';
        if (!std::getline(in, line)) {
          throw ParseError("row " + std::to_string(row) +
                               ": unterminated quoted field",
                           row, fields.size() + 1);
        }
        ++lines;
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty() && !was_quoted) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields.front()).empty();
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options,
                  std::string source) {
  Dataset data;
  data.source = std::move(source);
  std::vector<std::string> fields;
  std::size_t lines = 0;
  std::size_t row = 0;
  std::size_t arity = 0;
  bool header_pending = options.has_header;

  while (read_record(in, options.delimiter, fields, lines, lines + 1)) {
    row = lines;
    if (blank(fields)) continue;
    if (header_pending) {
      header_pending = false;
      for (auto& f : fields) data.column_names.emplace_back(trim(f));
      arity = fields.size();
      continue;
    }
    if (arity == 0) arity = fields.size();
    if (fields.size() != arity) {
      throw ParseError(data.source + ": row " + std::to_string(row) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(arity),
                       row, std::min(fields.size(), arity) + 1);
    }
    std::vector<double> coords;
    coords.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::optional<double> v = to_double(fields[c]);
      if (!v) {
        throw ParseError(data.source + ": row " + std::to_string(row) +
                             ", column " + std::to_string(c + 1) + ": '" +
                             std::string(trim(fields[c])) +
                             "' is not a finite number",
                         row, c + 1);
      }
      coords.push_back(*v);
    }
    data.points.emplace_back(std::move(coords));
  }
  if (data.points.empty()) {
    throw ParseError(data.source + ": no rows");
  }
  return data;
}

Dataset ingest_csv(const std::filesystem::path& path,
                   const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_csv(in, options, path.string());
}

DataPoint parse_point(std::string_view text) {
  std::vector<double> coords;
  std::size_t column = 1;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view cell = text.substr(0, comma);
    const std::optional<double> v = to_double(cell);
    if (!v) {
      throw ParseError("point coordinate " + std::to_string(column) + ": '" +
                           std::string(trim(cell)) + "' is not a finite number",
                       0, column);
    }
    coords.push_back(*v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    ++column;
  }
  return DataPoint(std::move(coords));
}

Hyperrectangle parse_rect(std::string_view text) {
  std::vector<Interval> intervals;
  std::size_t dim = 0;
  while (true) {
    const auto semi = text.find(';');
    const std::string_view part = text.substr(0, semi);
    const auto comma = part.find(',');
    std::optional<double> lo, hi;
    if (comma != std::string_view::npos &&
        part.find(',', comma + 1) == std::string_view::npos) {
      lo = to_double(part.substr(0, comma));
      hi = to_double(part.substr(comma + 1));
    }
    if (!lo || !hi) {
      throw ParseError("rect dimension " + std::to_string(dim) +
                       ": expected 'lo,hi', got '" + std::string(part) + "'");
    }
    if (!(*lo < *hi)) {
      throw ParseError("rect dimension " + std::to_string(dim) +
                       ": lower bound must be below upper bound");
    }
    intervals.emplace_back(*lo, *hi, Closure::kHalfOpenRight);
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
    ++dim;
  }
  return Hyperrectangle(std::move(intervals));
}

}  // namespace novelty
