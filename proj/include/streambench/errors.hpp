#pragma once

#include <stdexcept>
#include <string>

namespace streambench {

/// Raised when an index or horizon falls outside its valid range.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

/// Raised by geometry ops on inputs with no usable extent (e.g. two
/// zero-area boxes, or a zero-area prediction in a gradient).
class DegenerateGeometryError : public std::domain_error {
 public:
  explicit DegenerateGeometryError(const std::string& what)
      : std::domain_error(what) {}
};

/// Raised when tensor or logits shapes are incompatible.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Raised on malformed input files (annotations, results, specs).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on inconsistent run configuration (e.g. a constant latency that
/// can never meet the real-time deadline).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when loaded data violates a documented invariant (scores out of
/// [0,1], regressions in emit times, negative extents).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace streambench
