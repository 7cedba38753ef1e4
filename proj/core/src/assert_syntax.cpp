#include "pslab/assert_syntax.hpp"

namespace pslab {

namespace {

Assertion parse_implies(TokenCursor& cur);

Assertion parse_primary(TokenCursor& cur) {
    if (cur.accept(Tok::kw_top)) return make_top();
    if (cur.accept(Tok::lbracket)) {
        BoolExprPtr b = parse_bool_expr(cur);
        cur.expect(Tok::rbracket);
        return make_event(b);
    }
    if (cur.accept(Tok::kw_det)) {
        cur.expect(Tok::lparen);
        IntExprPtr e = parse_int_expr(cur);
        cur.expect(Tok::rparen);
        return make_det(e);
    }
    if (cur.accept(Tok::lparen)) {
        // `(P)` or the integer expression of an `E ~ D` atom.
        std::size_t mark = cur.pos();
        try {
            Assertion inner = parse_implies(cur);
            cur.expect(Tok::rparen);
            return inner;
        } catch (const ParseError&) {
            cur.rewind(mark);
        }
        IntExprPtr e = parse_int_expr(cur);
        cur.expect(Tok::rparen);
        cur.expect(Tok::tilde);
        return make_sim(e, parse_dist_expr(cur));
    }
    // Remaining form: E ~ D.
    IntExprPtr e = parse_int_expr(cur);
    cur.expect(Tok::tilde);
    return make_sim(e, parse_dist_expr(cur));
}

Assertion parse_unary(TokenCursor& cur) {
    if (cur.accept(Tok::bang)) return make_not(parse_unary(cur));
    if (cur.accept(Tok::kw_cond)) {
        cur.expect(Tok::lparen);
        IntExprPtr e = parse_int_expr(cur);
        cur.expect(Tok::rparen);
        return make_cond(e, parse_unary(cur));
    }
    return parse_primary(cur);
}

Assertion parse_sep(TokenCursor& cur) {
    Assertion lhs = parse_unary(cur);
    while (cur.accept(Tok::star)) {
        lhs = make_sep(std::move(lhs), parse_unary(cur));
    }
    return lhs;
}

Assertion parse_and(TokenCursor& cur) {
    Assertion lhs = parse_sep(cur);
    while (cur.accept(Tok::andand)) {
        lhs = make_and(std::move(lhs), parse_sep(cur));
    }
    return lhs;
}

Assertion parse_or(TokenCursor& cur) {
    Assertion lhs = parse_and(cur);
    while (cur.accept(Tok::oror)) {
        lhs = make_or(std::move(lhs), parse_and(cur));
    }
    return lhs;
}

Assertion parse_implies(TokenCursor& cur) {
    Assertion lhs = parse_or(cur);
    if (cur.accept(Tok::arrow)) {
        return make_implies(std::move(lhs), parse_implies(cur));
    }
    return lhs;
}

} // namespace

Assertion parse_assertion(TokenCursor& cur) { return parse_implies(cur); }

Assertion parse_assertion(std::string_view src) {
    TokenCursor cur(lex(src));
    Assertion a = parse_implies(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input after assertion");
    return a;
}

} // namespace pslab
