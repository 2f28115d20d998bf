#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symimg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point left a non-wrapped domain axis.
class DomainEscapeError : public Error {
 public:
  DomainEscapeError(int axis, double coordinate, std::ptrdiff_t index = -1);
  int axis() const noexcept { return axis_; }
  double coordinate() const noexcept { return coordinate_; }
  /// Sequence index of the offending point, -1 when not applicable.
  std::ptrdiff_t index() const noexcept { return index_; }
  DomainEscapeError at_index(std::ptrdiff_t index) const {
    return DomainEscapeError(axis_, coordinate_, index);
  }

 private:
  int axis_;
  double coordinate_;
  std::ptrdiff_t index_;
};

/// The map lacks the information an operation needs (interval extension,
/// Lipschitz bound, inverse).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A point is not inside any cell of the covering.
class NotCoveredError : public Error {
 public:
  using Error::Error;
};

/// A search (e.g. for a consistent flow extension) ran out of candidates.
class ExhaustionError : public Error {
 public:
  using Error::Error;
};

/// Two coverings or graphs are not related by subdivision.
class LineageError : public Error {
 public:
  using Error::Error;
};

/// Consistency (s(w_{t+1}) = w_t) or inclusion check failed.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, int level, std::ptrdiff_t index);
  int level() const noexcept { return level_; }
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  int level_;
  std::ptrdiff_t index_;
};

/// A combinatorial enumeration exceeded its configured limit.
class CapError : public Error {
 public:
  using Error::Error;
};

/// Operation precondition violated (bad argument).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Flow references an arc the graph does not have.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Malformed map specification, domain string or expression.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace symimg
