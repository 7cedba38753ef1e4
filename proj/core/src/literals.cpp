#include "pslab/literals.hpp"

#include <sstream>

namespace pslab {

State parse_state_literal(TokenCursor& cur) {
    cur.expect(Tok::lbrace);
    std::map<VarName, Integer> bindings;
    if (!cur.at(Tok::rbrace)) {
        do {
            Token name = cur.expect(Tok::identifier);
            VarName var(name.text);
            cur.expect(Tok::colon);
            bool negative = cur.accept(Tok::minus);
            Integer value = cur.expect(Tok::integer).int_value;
            if (negative) value = -value;
            if (bindings.contains(var)) {
                throw ParseError("duplicate variable '" + var.str() + "' in state literal",
                                 name.line, name.col);
            }
            bindings.emplace(std::move(var), std::move(value));
        } while (cur.accept(Tok::comma));
    }
    cur.expect(Tok::rbrace);
    return State(std::move(bindings));
}

State parse_state_literal(std::string_view src) {
    TokenCursor cur(lex(src));
    State s = parse_state_literal(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input after state literal");
    return s;
}

RandomState parse_random_state_literal(std::string_view src) {
    TokenCursor cur(lex(src));
    std::vector<RandomState::Point> points;
    do {
        Rational weight = parse_rational_literal(cur);
        if (!weight.is_positive()) {
            cur.fail("random-state weight " + weight.str() + " must be positive");
        }
        State s = parse_state_literal(cur);
        points.emplace_back(std::move(weight), std::move(s));
    } while (cur.accept(Tok::plus));
    if (!cur.at_end()) cur.fail("unexpected trailing input after random-state literal");
    Rational total;
    for (const auto& [weight, state] : points) total += weight;
    if (!total.is_one()) {
        throw ParseError("random-state weights sum to " + total.str() + ", expected 1", 1, 1);
    }
    return RandomState(std::move(points));
}

std::string format_state(const State& s) { return s.str(); }

std::string format_random_state(const RandomState& sigma) {
    std::ostringstream os;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i > 0) os << " + ";
        os << sigma.weight(i).str() << " " << sigma.value(i).str();
    }
    return os.str();
}

std::string format_state_dist(const Dist<State>& d) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [state, weight] : d.entries()) {
        if (!first) os << " + ";
        first = false;
        os << weight.str() << " " << state.str();
    }
    return os.str();
}

} // namespace pslab
