#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pkgnet {

// Base class for all pkgnet errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (Packages index, relation field, edge list).
// line() is 1-based; 0 means "no line information".
class ParseError : public Error {
public:
  explicit ParseError(const std::string& message, std::size_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Reference to a node that is not part of the graph.
class LookupError : public Error {
public:
  using Error::Error;
};

// The input data cannot support the requested computation: too few points,
// degenerate variance, a partition that does not cover the needed nodes,
// a graph with too few edges to rewire, and so on.
class DataError : public Error {
public:
  using Error::Error;
};

}  // namespace pkgnet
