#pragma once

#include "cl/extract/syntax.hpp"

#include <string_view>

namespace cl::extract {

// Parses exactly one Java 8 method (or constructor) declaration, optionally
// preceded by comments and annotations. Anything else, including trailing
// tokens after the body, raises ParseError with the offending position.
SyntaxTree parse_method(std::string_view source);

}  // namespace cl::extract
