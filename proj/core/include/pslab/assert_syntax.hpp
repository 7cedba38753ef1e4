#pragma once

#include <string_view>

#include "pslab/assertions.hpp"
#include "pslab/parser.hpp"

namespace pslab {

// Concrete assertion syntax:
//   [B]   E ~ D   det(E)   top   !P   cond(E) P   P * Q   P && Q   P || Q   P -> Q
// Precedence: unary > `*` > `&&` > `||` > `->` (right-associative).
Assertion parse_assertion(std::string_view src);
Assertion parse_assertion(TokenCursor& cur);

} // namespace pslab
