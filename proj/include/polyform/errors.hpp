#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyform {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got);
};

class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("matrix is singular") {}
};

// Raised when a point is not a cell (vertex of the dual graph) of a tiling.
class NotACell : public Error {
 public:
  explicit NotACell(const std::string& point)
      : Error("not a cell of this tiling: " + point) {}
};

// Parse failure. Syntax errors carry a 1-based line/column; semantic errors
// carry the JSON pointer of the offending value instead (line == 0).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0,
             std::string path = {});

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& path() const { return path_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string path_;
};

}  // namespace polyform
