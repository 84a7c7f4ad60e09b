#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pssc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroColumnError : public Error {
 public:
  explicit ZeroColumnError(std::ptrdiff_t index)
      : Error("column " + std::to_string(index) + " is identically zero"),
        index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class NonFiniteError : public Error {
 public:
  NonFiniteError(std::ptrdiff_t row, std::ptrdiff_t col)
      : Error("non-finite entry at (" + std::to_string(row) + ", " +
              std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  std::ptrdiff_t row() const noexcept { return row_; }
  std::ptrdiff_t col() const noexcept { return col_; }

 private:
  std::ptrdiff_t row_;
  std::ptrdiff_t col_;
};

class TooFewPointsError : public Error {
 public:
  TooFewPointsError(std::ptrdiff_t points, int clusters)
      : Error(std::to_string(points) + " points cannot form " +
              std::to_string(clusters) + " clusters of at least 2 points") {}
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// All points mutually orthogonal: the correlation scale is zero.
class DegenerateScaleError : public Error {
 public:
  DegenerateScaleError()
      : Error("every point is orthogonal to all others; lambda0 undefined") {}
};

class DegenerateAffinityError : public Error {
 public:
  DegenerateAffinityError() : Error("affinity matrix has zero diagonal mass") {}
};

class EigenFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(col) + ": " + message),
        line_(line),
        col_(col) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pssc
