#include "symimg/errors.hpp"

#include <sstream>

namespace symimg {

namespace {

std::string escape_message(int axis, double coordinate, std::ptrdiff_t index) {
  std::ostringstream os;
  os.precision(17);
  os << "point escapes the domain on axis " << axis << " (coordinate " << coordinate << ")";
  if (index >= 0) os << " at index " << index;
  return os.str();
}

}  // namespace

DomainEscapeError::DomainEscapeError(int axis, double coordinate, std::ptrdiff_t index)
    : Error(escape_message(axis, coordinate, index)),
      axis_(axis),
      coordinate_(coordinate),
      index_(index) {}

ConsistencyError::ConsistencyError(const std::string& what, int level, std::ptrdiff_t index)
    : Error(what + " (level " + std::to_string(level) + ", index " + std::to_string(index) + ")"),
      level_(level),
      index_(index) {}

}  // namespace symimg
