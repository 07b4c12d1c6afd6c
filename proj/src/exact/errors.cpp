#include "polyform/errors.hpp"

namespace polyform {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(got)) {}

namespace {

std::string parse_message(const std::string& what, std::size_t line, std::size_t column,
                          const std::string& path) {
  if (line > 0) {
    return "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
           ": " + what;
  }
  if (!path.empty()) return "parse error at " + path + ": " + what;
  return "parse error: " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column,
                       std::string path)
    : Error(parse_message(what, line, column, path)),
      line_(line),
      column_(column),
      path_(std::move(path)) {}

}  // namespace polyform
