#pragma once

#include <string_view>
#include <vector>

#include "pslab/ast.hpp"
#include "pslab/errors.hpp"
#include "pslab/lexer.hpp"

namespace pslab {

// Token stream with positions, shared by the program, assertion, state
// literal and spec-file parsers.
class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t off = 0) const {
        std::size_t i = pos_ + off;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& get() {
        const Token& t = peek();
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_end() const { return at(Tok::end); }
    bool accept(Tok kind) {
        if (!at(kind)) return false;
        get();
        return true;
    }
    Token expect(Tok kind) {
        if (!at(kind)) fail("expected " + token_name(kind) + ", found " + token_name(peek().kind));
        return get();
    }

    std::size_t pos() const { return pos_; }
    void rewind(std::size_t p) { pos_ = p; }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        throw ParseError(message, t.line, t.col);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Whole-input entry points (used by the CLI and tests).
CommandPtr parse_program(std::string_view src);
IntExprPtr parse_int_expr(std::string_view src);
BoolExprPtr parse_bool_expr(std::string_view src);
DistExprPtr parse_dist_expr(std::string_view src);

// Cursor-level parsers for embedding into larger grammars.
CommandPtr parse_command_seq(TokenCursor& cur);
IntExprPtr parse_int_expr(TokenCursor& cur);
BoolExprPtr parse_bool_expr(TokenCursor& cur);
DistExprPtr parse_dist_expr(TokenCursor& cur);
Rational parse_rational_literal(TokenCursor& cur); // [-] INT [/ INT]

} // namespace pslab
