#include "pslab/lexer.hpp"

#include <map>

#include "pslab/errors.hpp"

namespace pslab {

std::string token_name(Tok kind) {
    switch (kind) {
    case Tok::identifier: return "identifier";
    case Tok::integer: return "integer";
    case Tok::kw_skip: return "'skip'";
    case Tok::kw_if: return "'if'";
    case Tok::kw_then: return "'then'";
    case Tok::kw_else: return "'else'";
    case Tok::kw_while: return "'while'";
    case Tok::kw_do: return "'do'";
    case Tok::kw_true: return "'true'";
    case Tok::kw_false: return "'false'";
    case Tok::kw_min: return "'min'";
    case Tok::kw_max: return "'max'";
    case Tok::kw_mod: return "'mod'";
    case Tok::kw_uniform: return "'uniform'";
    case Tok::kw_bernoulli: return "'bernoulli'";
    case Tok::kw_dirac: return "'dirac'";
    case Tok::kw_discrete: return "'discrete'";
    case Tok::kw_det: return "'det'";
    case Tok::kw_cond: return "'cond'";
    case Tok::kw_top: return "'top'";
    case Tok::assign: return "':='";
    case Tok::tilde: return "'~'";
    case Tok::semicolon: return "';'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::comma: return "','";
    case Tok::colon: return "':'";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::slash: return "'/'";
    case Tok::eq: return "'='";
    case Tok::lt: return "'<'";
    case Tok::le: return "'<='";
    case Tok::bang: return "'!'";
    case Tok::andand: return "'&&'";
    case Tok::oror: return "'||'";
    case Tok::arrow: return "'->'";
    case Tok::end: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view src) {
    static const std::map<std::string_view, Tok> keywords = {
        {"skip", Tok::kw_skip},     {"if", Tok::kw_if},
        {"then", Tok::kw_then},     {"else", Tok::kw_else},
        {"while", Tok::kw_while},   {"do", Tok::kw_do},
        {"true", Tok::kw_true},     {"false", Tok::kw_false},
        {"min", Tok::kw_min},       {"max", Tok::kw_max},
        {"mod", Tok::kw_mod},       {"uniform", Tok::kw_uniform},
        {"bernoulli", Tok::kw_bernoulli}, {"dirac", Tok::kw_dirac},
        {"discrete", Tok::kw_discrete},   {"det", Tok::kw_det},
        {"cond", Tok::kw_cond},     {"top", Tok::kw_top},
    };

    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i < src.size() && src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto peek = [&](std::size_t off = 0) -> char {
        return i + off < src.size() ? src[i + off] : '\0';
    };
    auto push = [&](Tok kind, std::string text, int l, int c) {
        out.push_back(Token{kind, std::move(text), Integer(0), l, c});
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        int tl = line;
        int tc = col;
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t start = i;
            while (i < src.size() &&
                   ((src[i] >= 'a' && src[i] <= 'z') || (src[i] >= 'A' && src[i] <= 'Z') ||
                    (src[i] >= '0' && src[i] <= '9') || src[i] == '_')) {
                advance();
            }
            std::string word(src.substr(start, i - start));
            auto kw = keywords.find(word);
            push(kw == keywords.end() ? Tok::identifier : kw->second, std::move(word), tl, tc);
            continue;
        }
        if (c >= '0' && c <= '9') {
            std::size_t start = i;
            while (i < src.size() && src[i] >= '0' && src[i] <= '9') advance();
            std::string digits(src.substr(start, i - start));
            Token t{Tok::integer, digits, Integer(digits, 10), tl, tc};
            out.push_back(std::move(t));
            continue;
        }
        switch (c) {
        case ':':
            if (peek(1) == '=') {
                push(Tok::assign, ":=", tl, tc);
                advance(2);
            } else {
                push(Tok::colon, ":", tl, tc);
                advance();
            }
            continue;
        case '~': push(Tok::tilde, "~", tl, tc); advance(); continue;
        case ';': push(Tok::semicolon, ";", tl, tc); advance(); continue;
        case '{': push(Tok::lbrace, "{", tl, tc); advance(); continue;
        case '}': push(Tok::rbrace, "}", tl, tc); advance(); continue;
        case '(': push(Tok::lparen, "(", tl, tc); advance(); continue;
        case ')': push(Tok::rparen, ")", tl, tc); advance(); continue;
        case '[': push(Tok::lbracket, "[", tl, tc); advance(); continue;
        case ']': push(Tok::rbracket, "]", tl, tc); advance(); continue;
        case ',': push(Tok::comma, ",", tl, tc); advance(); continue;
        case '+': push(Tok::plus, "+", tl, tc); advance(); continue;
        case '-':
            if (peek(1) == '>') {
                push(Tok::arrow, "->", tl, tc);
                advance(2);
            } else {
                push(Tok::minus, "-", tl, tc);
                advance();
            }
            continue;
        case '*': push(Tok::star, "*", tl, tc); advance(); continue;
        case '/': push(Tok::slash, "/", tl, tc); advance(); continue;
        case '=': push(Tok::eq, "=", tl, tc); advance(); continue;
        case '<':
            if (peek(1) == '=') {
                push(Tok::le, "<=", tl, tc);
                advance(2);
            } else {
                push(Tok::lt, "<", tl, tc);
                advance();
            }
            continue;
        case '!': push(Tok::bang, "!", tl, tc); advance(); continue;
        case '&':
            if (peek(1) == '&') {
                push(Tok::andand, "&&", tl, tc);
                advance(2);
                continue;
            }
            throw ParseError("unexpected '&' (did you mean '&&'?)", tl, tc);
        case '|':
            if (peek(1) == '|') {
                push(Tok::oror, "||", tl, tc);
                advance(2);
                continue;
            }
            throw ParseError("unexpected '|' (did you mean '||'?)", tl, tc);
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
        }
    }
    push(Tok::end, "", line, col);
    return out;
}

} // namespace pslab
