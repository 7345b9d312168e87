#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "novelty/geometry.hpp"

namespace novelty {

struct Dataset {
  std::vector<DataPoint> points;
  std::vector<std::string> column_names;  // empty without a header row
  std::string source;

  std::size_t dims() const noexcept {
    return points.empty() ? 0 : points.front().dims();
  }
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = false;
};

// RFC 4180 style: optional double-quoted fields with "" escapes, LF or CRLF
// line ends, blank lines ignored. Every cell must parse as a finite real and
// every row must have the same arity.
//
// Throws ParseError carrying the 1-based row (physical record, header
// included) and column of the offending cell.
Dataset parse_csv(std::istream& in, const CsvOptions& options = {},
                  std::string source = "<stream>");
Dataset ingest_csv(const std::filesystem::path& path,
                   const CsvOptions& options = {});

// "25,20" -> DataPoint. Throws ParseError.
DataPoint parse_point(std::string_view text);

// "lo0,hi0;lo1,hi1" -> half-open hyperrectangle. Throws ParseError.
Hyperrectangle parse_rect(std::string_view text);

}  // namespace novelty
