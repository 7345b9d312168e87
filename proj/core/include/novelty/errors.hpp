#pragma once

#include <stdexcept>
#include <string>

namespace novelty {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Non-finite coordinates and similar malformed data.
class DataError : public Error {
 public:
  using Error::Error;
};

class DegenerateSplitError : public Error {
 public:
  using Error::Error;
};

class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// A scripted random source or split script that cannot be replayed.
class ScriptError : public Error {
 public:
  using Error::Error;
};

class InfiniteDepthError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(what), row_(row), column_(column) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  // 1-based; 0 means "not tied to a position".
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_ = 0;
  std::size_t column_ = 0;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace novelty

namespace novelty {

// Wraps (via std::throw_with_nested) a failure while building tree i.
class TreeBuildError : public Error {
 public:
  TreeBuildError(std::size_t tree_index, const std::string& what)
      : Error("tree " + std::to_string(tree_index) + ": " + what),
        tree_index_(tree_index) {}
  std::size_t tree_index() const noexcept { return tree_index_; }

 private:
  std::size_t tree_index_;
};

}  // namespace novelty
