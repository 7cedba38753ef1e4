#pragma once

#include <string>
#include <string_view>

#include "pslab/dist.hpp"
#include "pslab/parser.hpp"
#include "pslab/random_state.hpp"
#include "pslab/state.hpp"

namespace pslab {

// Textual state literal: `{X:0, Y:-1}`, whitespace-insensitive.
State parse_state_literal(std::string_view src);
State parse_state_literal(TokenCursor& cur);

// Random-state literal: `1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}`. Weights must be
// positive rationals summing to exactly 1.
RandomState parse_random_state_literal(std::string_view src);

std::string format_state(const State& s);
std::string format_random_state(const RandomState& sigma);

// A distribution over states in the same `w {..} + w {..}` shape, keyed in
// canonical state order.
std::string format_state_dist(const Dist<State>& d);

} // namespace pslab
