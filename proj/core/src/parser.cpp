#include "pslab/parser.hpp"

namespace pslab {

namespace {

IntExprPtr parse_int_atom(TokenCursor& cur);
IntExprPtr parse_int_unary(TokenCursor& cur);

IntExprPtr parse_int_muldiv(TokenCursor& cur) {
    IntExprPtr lhs = parse_int_unary(cur);
    for (;;) {
        if (cur.accept(Tok::star)) {
            lhs = int_bin(IntBinOp::mul, lhs, parse_int_unary(cur));
        } else if (cur.accept(Tok::slash)) {
            lhs = int_bin(IntBinOp::div, lhs, parse_int_unary(cur));
        } else if (cur.accept(Tok::kw_mod)) {
            lhs = int_bin(IntBinOp::mod, lhs, parse_int_unary(cur));
        } else {
            return lhs;
        }
    }
}

IntExprPtr parse_int_addsub(TokenCursor& cur) {
    IntExprPtr lhs = parse_int_muldiv(cur);
    for (;;) {
        if (cur.accept(Tok::plus)) {
            lhs = int_bin(IntBinOp::add, lhs, parse_int_muldiv(cur));
        } else if (cur.accept(Tok::minus)) {
            lhs = int_bin(IntBinOp::sub, lhs, parse_int_muldiv(cur));
        } else {
            return lhs;
        }
    }
}

IntExprPtr parse_int_unary(TokenCursor& cur) {
    if (cur.accept(Tok::minus)) {
        return int_neg(parse_int_unary(cur));
    }
    return parse_int_atom(cur);
}

IntExprPtr parse_int_atom(TokenCursor& cur) {
    if (cur.at(Tok::integer)) {
        return int_lit(cur.get().int_value);
    }
    if (cur.at(Tok::identifier)) {
        return int_var(VarName(cur.get().text));
    }
    if (cur.at(Tok::kw_min) || cur.at(Tok::kw_max)) {
        bool is_min = cur.get().kind == Tok::kw_min;
        cur.expect(Tok::lparen);
        IntExprPtr lhs = parse_int_addsub(cur);
        cur.expect(Tok::comma);
        IntExprPtr rhs = parse_int_addsub(cur);
        cur.expect(Tok::rparen);
        return int_bin(is_min ? IntBinOp::min : IntBinOp::max, lhs, rhs);
    }
    if (cur.accept(Tok::lparen)) {
        IntExprPtr e = parse_int_addsub(cur);
        cur.expect(Tok::rparen);
        return e;
    }
    cur.fail("expected integer expression, found " + token_name(cur.peek().kind));
}

BoolExprPtr parse_bool_or(TokenCursor& cur);

BoolExprPtr parse_bool_atom(TokenCursor& cur) {
    if (cur.accept(Tok::kw_true)) return bool_lit(true);
    if (cur.accept(Tok::kw_false)) return bool_lit(false);
    // Try a comparison first; on failure fall back to a parenthesised
    // boolean expression. Backtracking keeps both `(X + 1) = Y` and
    // `(true || false)` parseable.
    std::size_t mark = cur.pos();
    try {
        IntExprPtr lhs = parse_int_addsub(cur);
        CmpOp op;
        if (cur.accept(Tok::eq)) {
            op = CmpOp::eq;
        } else if (cur.accept(Tok::le)) {
            op = CmpOp::le;
        } else if (cur.accept(Tok::lt)) {
            op = CmpOp::lt;
        } else {
            cur.fail("expected '=', '<' or '<=' after integer expression");
        }
        return bool_cmp(op, lhs, parse_int_addsub(cur));
    } catch (const ParseError&) {
        cur.rewind(mark);
    }
    if (cur.accept(Tok::lparen)) {
        BoolExprPtr inner = parse_bool_or(cur);
        cur.expect(Tok::rparen);
        return inner;
    }
    cur.fail("expected boolean expression, found " + token_name(cur.peek().kind));
}

BoolExprPtr parse_bool_not(TokenCursor& cur) {
    if (cur.accept(Tok::bang)) {
        return bool_not(parse_bool_not(cur));
    }
    return parse_bool_atom(cur);
}

BoolExprPtr parse_bool_and(TokenCursor& cur) {
    BoolExprPtr lhs = parse_bool_not(cur);
    while (cur.accept(Tok::andand)) {
        lhs = bool_bin(BoolBinOp::conj, lhs, parse_bool_not(cur));
    }
    return lhs;
}

BoolExprPtr parse_bool_or(TokenCursor& cur) {
    BoolExprPtr lhs = parse_bool_and(cur);
    while (cur.accept(Tok::oror)) {
        lhs = bool_bin(BoolBinOp::disj, lhs, parse_bool_and(cur));
    }
    return lhs;
}

CommandPtr parse_block(TokenCursor& cur) {
    cur.expect(Tok::lbrace);
    CommandPtr body = parse_command_seq(cur);
    cur.expect(Tok::rbrace);
    return body;
}

CommandPtr parse_statement(TokenCursor& cur) {
    if (cur.accept(Tok::kw_skip)) return cmd_skip();
    if (cur.at(Tok::kw_if)) {
        cur.get();
        BoolExprPtr guard = parse_bool_or(cur);
        cur.expect(Tok::kw_then);
        CommandPtr then_branch = parse_block(cur);
        cur.expect(Tok::kw_else);
        CommandPtr else_branch = parse_block(cur);
        return cmd_if(guard, then_branch, else_branch);
    }
    if (cur.at(Tok::kw_while)) {
        cur.get();
        BoolExprPtr guard = parse_bool_or(cur);
        cur.expect(Tok::kw_do);
        CommandPtr body = parse_block(cur);
        return cmd_while(guard, body);
    }
    if (cur.at(Tok::identifier)) {
        VarName target(cur.get().text);
        if (cur.accept(Tok::assign)) {
            return cmd_assign(target, parse_int_addsub(cur));
        }
        if (cur.accept(Tok::tilde)) {
            return cmd_sample(target, parse_dist_expr(cur));
        }
        cur.fail("expected ':=' or '~' after variable '" + target.str() + "'");
    }
    cur.fail("expected statement, found " + token_name(cur.peek().kind));
}

} // namespace

Rational parse_rational_literal(TokenCursor& cur) {
    bool negative = cur.accept(Tok::minus);
    Integer num = cur.expect(Tok::integer).int_value;
    Integer den(1);
    if (cur.accept(Tok::slash)) {
        den = cur.expect(Tok::integer).int_value;
        if (sgn(den) == 0) cur.fail("rational literal with zero denominator");
    }
    if (negative) num = -num;
    return Rational(num, den);
}

DistExprPtr parse_dist_expr(TokenCursor& cur) {
    if (cur.accept(Tok::kw_uniform)) {
        cur.expect(Tok::lparen);
        IntExprPtr first = parse_int_addsub(cur);
        if (cur.accept(Tok::comma)) {
            IntExprPtr second = parse_int_addsub(cur);
            cur.expect(Tok::rparen);
            return dist_uniform(first, second);
        }
        cur.expect(Tok::rparen);
        return dist_uniform(first);
    }
    if (cur.accept(Tok::kw_bernoulli)) {
        cur.expect(Tok::lparen);
        Rational p = parse_rational_literal(cur);
        if (p.is_negative() || p > Rational(1)) {
            cur.fail("bernoulli parameter " + p.str() + " outside [0,1]");
        }
        cur.expect(Tok::rparen);
        return dist_bernoulli(p);
    }
    if (cur.accept(Tok::kw_dirac)) {
        cur.expect(Tok::lparen);
        IntExprPtr value = parse_int_addsub(cur);
        cur.expect(Tok::rparen);
        return dist_dirac(value);
    }
    if (cur.accept(Tok::kw_discrete)) {
        cur.expect(Tok::lbrace);
        std::vector<std::pair<IntExprPtr, Rational>> entries;
        Rational total;
        do {
            IntExprPtr value = parse_int_addsub(cur);
            cur.expect(Tok::colon);
            Rational weight = parse_rational_literal(cur);
            if (!weight.is_positive()) {
                cur.fail("discrete weight " + weight.str() + " must be positive");
            }
            total += weight;
            entries.emplace_back(value, weight);
        } while (cur.accept(Tok::comma));
        cur.expect(Tok::rbrace);
        if (!total.is_one()) {
            cur.fail("discrete weights sum to " + total.str() + ", expected 1");
        }
        return dist_discrete(std::move(entries));
    }
    cur.fail("expected distribution expression (uniform, bernoulli, dirac or discrete)");
}

CommandPtr parse_command_seq(TokenCursor& cur) {
    // `;` is right-associative.
    CommandPtr head = parse_statement(cur);
    if (cur.accept(Tok::semicolon)) {
        return cmd_seq(head, parse_command_seq(cur));
    }
    return head;
}

IntExprPtr parse_int_expr(TokenCursor& cur) { return parse_int_addsub(cur); }

BoolExprPtr parse_bool_expr(TokenCursor& cur) { return parse_bool_or(cur); }

CommandPtr parse_program(std::string_view src) {
    TokenCursor cur(lex(src));
    CommandPtr program = parse_command_seq(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return program;
}

IntExprPtr parse_int_expr(std::string_view src) {
    TokenCursor cur(lex(src));
    IntExprPtr e = parse_int_addsub(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return e;
}

BoolExprPtr parse_bool_expr(std::string_view src) {
    TokenCursor cur(lex(src));
    BoolExprPtr b = parse_bool_or(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return b;
}

DistExprPtr parse_dist_expr(std::string_view src) {
    TokenCursor cur(lex(src));
    DistExprPtr d = parse_dist_expr(cur);
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return d;
}

} // namespace pslab
