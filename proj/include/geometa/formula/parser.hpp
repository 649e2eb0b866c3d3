#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/formula/ast.hpp"

namespace geometa::formula {

inline bool is_reserved(std::string_view w) {
    return w == "sup" || w == "inf" || w == "d" || w == "L" || w == "min" || w == "max" || w == "abs";
}

namespace detail {

struct Token {
    enum Kind { Ident, Number, At, LParen, RParen, LBracket, RBracket, Comma, Dot, Plus, Monus, Star, End } kind;
    std::string text;
    SourcePos pos;
};

inline const char* token_name(Token::Kind k) {
    switch (k) {
    case Token::Ident: return "identifier";
    case Token::Number: return "number";
    case Token::At: return "'@'";
    case Token::LParen: return "'('";
    case Token::RParen: return "')'";
    case Token::LBracket: return "'['";
    case Token::RBracket: return "']'";
    case Token::Comma: return "','";
    case Token::Dot: return "'.'";
    case Token::Plus: return "'+'";
    case Token::Monus: return "'-.'";
    case Token::Star: return "'*'";
    case Token::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') ++line, col = 1;
            else ++col;
        }
    };
    auto is_digit = [&](std::size_t k) { return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])); };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        const SourcePos pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
                ++j;
            out.push_back({Token::Ident, std::string(s.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (is_digit(i)) {
            std::size_t j = i;
            while (is_digit(j)) ++j;
            if (j < s.size() && s[j] == '.' && is_digit(j + 1)) {
                ++j;
                while (is_digit(j)) ++j;
            } else if (j < s.size() && s[j] == '/') {
                if (!is_digit(j + 1)) throw ParseError("expected denominator after '/'", line, col + (j - i) + 1);
                ++j;
                while (is_digit(j)) ++j;
            }
            out.push_back({Token::Number, std::string(s.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        Token::Kind k;
        std::size_t len = 1;
        switch (c) {
        case '@': k = Token::At; break;
        case '(': k = Token::LParen; break;
        case ')': k = Token::RParen; break;
        case '[': k = Token::LBracket; break;
        case ']': k = Token::RBracket; break;
        case ',': k = Token::Comma; break;
        case '.': k = Token::Dot; break;
        case '+': k = Token::Plus; break;
        case '*': k = Token::Star; break;
        case '-':
            if (i + 1 < s.size() && s[i + 1] == '.') {
                k = Token::Monus;
                len = 2;
                break;
            }
            throw ParseError("'-' is not an operator; truncated subtraction is '-.'", line, col);
        default: throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back({k, std::string(s.substr(i, len)), pos});
        advance(len);
    }
    out.push_back({Token::End, "", {line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    NodePtr parse_formula() {
        NodePtr f = formula();
        expect(Token::End);
        return f;
    }

    NodePtr parse_term() {
        NodePtr t = term();
        expect(Token::End);
        return t;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(p_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[p_ < toks_.size() - 1 ? p_++ : p_]; }
    bool at(Token::Kind k) const { return peek().kind == k; }
    bool at_word(std::string_view w) const { return at(Token::Ident) && peek().text == w; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg, t.pos.line, t.pos.column);
    }

    const Token& expect(Token::Kind k) {
        if (!at(k))
            fail(std::string("expected ") + token_name(k) + ", found " +
                     (at(Token::End) ? std::string("end of input") : "'" + peek().text + "'"),
                 peek());
        return next();
    }

    std::string identifier(const char* what) {
        const Token& t = expect(Token::Ident);
        if (is_reserved(t.text)) fail(std::string("reserved word '") + t.text + "' used as " + what, t);
        return t.text;
    }

    Rational rational(const Token& t) {
        try {
            return Rational::parse(t.text);
        } catch (const ParameterError& e) {
            fail(e.what(), t);
        }
    }

    NodePtr formula() {
        NodePtr lhs = scaled();
        while (at(Token::Plus) || at(Token::Monus)) {
            const Token& op = next();
            NodePtr rhs = scaled();
            lhs = ast::make(op.kind == Token::Plus ? NodeKind::Add : NodeKind::TruncSub, "", {}, {lhs, rhs}, op.pos);
        }
        return lhs;
    }

    NodePtr scaled() {
        if (!at(Token::Number)) return primary();
        const Token& t = next();
        const Rational q = rational(t);
        if (at(Token::Star)) {
            next();
            return ast::make(NodeKind::Scale, "", q, {scaled()}, t.pos);
        }
        if (q < Rational(0) || q > Rational(1)) fail("constant " + t.text + " outside [0,1]", t);
        return ast::make(NodeKind::Number, "", q, {}, t.pos);
    }

    std::vector<NodePtr> formula_list() {
        expect(Token::LParen);
        std::vector<NodePtr> args{formula()};
        while (at(Token::Comma)) next(), args.push_back(formula());
        expect(Token::RParen);
        return args;
    }

    NodePtr primary() {
        const Token& t = peek();
        if (at(Token::LParen)) {
            next();
            NodePtr f = formula();
            expect(Token::RParen);
            return f;
        }
        if (!at(Token::Ident)) fail(std::string("expected a formula, found ") + token_name(t.kind), t);
        const std::string word = t.text;
        const SourcePos pos = t.pos;
        if (word == "sup" || word == "inf") {
            next();
            std::string v = identifier("a bound variable");
            expect(Token::Dot);
            return ast::make(word == "sup" ? NodeKind::Sup : NodeKind::Inf, std::move(v), {}, {formula()}, pos);
        }
        if (word == "d") {
            next();
            expect(Token::LParen);
            NodePtr a = term();
            expect(Token::Comma);
            NodePtr b = term();
            expect(Token::RParen);
            return ast::make(NodeKind::Dist, "", {}, {a, b}, pos);
        }
        if (word == "min" || word == "max") {
            next();
            return ast::make(word == "min" ? NodeKind::Min : NodeKind::Max, "", {}, formula_list(), pos);
        }
        if (word == "abs") {
            next();
            auto args = formula_list();
            if (args.size() != 2) fail("abs takes exactly two formulas", t);
            return ast::make(NodeKind::Abs, "", {}, std::move(args), pos);
        }
        if (word == "L") fail("L[t](x,y) is a term, not a formula", t);
        next();
        if (!at(Token::LParen)) fail("expected '(' after predicate symbol '" + word + "'", peek());
        next();
        std::vector<NodePtr> args{term()};
        while (at(Token::Comma)) next(), args.push_back(term());
        expect(Token::RParen);
        return ast::make(NodeKind::Pred, word, {}, std::move(args), pos);
    }

    NodePtr term() {
        const Token& t = peek();
        const SourcePos pos = t.pos;
        if (at(Token::At)) {
            next();
            return ast::make(NodeKind::Const, identifier("a constant name"), {}, {}, pos);
        }
        if (at_word("L")) {
            next();
            expect(Token::LBracket);
            const Token& qt = expect(Token::Number);
            const Rational q = rational(qt);
            if (q < Rational(0) || q > Rational(1)) fail("L parameter " + qt.text + " outside [0,1]", qt);
            expect(Token::RBracket);
            expect(Token::LParen);
            NodePtr a = term();
            expect(Token::Comma);
            NodePtr b = term();
            expect(Token::RParen);
            return ast::make(NodeKind::GeoApply, "", q, {a, b}, pos);
        }
        std::string name = identifier("a term");
        if (at(Token::LParen)) {
            next();
            NodePtr arg = term();
            expect(Token::RParen);
            return ast::make(NodeKind::MapApply, std::move(name), {}, {arg}, pos);
        }
        return ast::make(NodeKind::Var, std::move(name), {}, {}, pos);
    }

    std::vector<Token> toks_;
    std::size_t p_ = 0;
};

}  // namespace detail

/// Parses one formula. Throws ParseError with line and column.
inline NodePtr parse(std::string_view text) { return detail::Parser(text).parse_formula(); }

inline NodePtr parse_term(std::string_view text) { return detail::Parser(text).parse_term(); }

}  // namespace geometa::formula
