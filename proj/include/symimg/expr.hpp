#pragma once

#include <cstddef>
#include <string>

#include "symimg/flow.hpp"

namespace symimg {

/// Compiles a scalar expression over point coordinates.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | primary
///   primary := number | 'pi' | 'x' digits | 'sin' '(' expr ')'
///            | 'cos' '(' expr ')' | '(' expr ')'
///
/// Variables x0, x1, ... must be below `dim`. Throws ParseError.
ScalarFunction parse_expression(const std::string& text, std::size_t dim);

}  // namespace symimg
