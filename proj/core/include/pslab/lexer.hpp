#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pslab/rational.hpp"

namespace pslab {

enum class Tok {
    identifier,
    integer,
    kw_skip,
    kw_if,
    kw_then,
    kw_else,
    kw_while,
    kw_do,
    kw_true,
    kw_false,
    kw_min,
    kw_max,
    kw_mod,
    kw_uniform,
    kw_bernoulli,
    kw_dirac,
    kw_discrete,
    kw_det,
    kw_cond,
    kw_top,
    assign,    // :=
    tilde,     // ~
    semicolon, // ;
    lbrace,
    rbrace,
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    colon,
    plus,
    minus,
    star,
    slash,
    eq,     // =
    lt,     // <
    le,     // <=
    bang,   // !
    andand, // &&
    oror,   // ||
    arrow,  // ->
    end,
};

struct Token {
    Tok kind;
    std::string text;
    Integer int_value; // valid for Tok::integer
    int line = 1;
    int col = 1;
};

std::string token_name(Tok kind);

// Tokenises program/assertion/literal source. `#` starts a line comment.
// Throws ParseError on unknown characters.
std::vector<Token> lex(std::string_view src);

} // namespace pslab
