#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geometa/error.hpp"

namespace geometa {

/// A sampling function F: N -> N, either a small integer expression in `n`
/// (literals, n, +, *, ^ with an integer exponent, parentheses) or an
/// explicit table. Values must be positive.
class FSpec {
public:
    static FSpec parse(std::string_view text) {
        Parser p{text, 0, {}};
        FSpec f;
        f.code_ = p.parse();
        f.text_ = std::string(text);
        return f;
    }

    static FSpec table(std::map<std::uint64_t, std::uint64_t> values) {
        if (values.empty()) throw ParameterError("F table is empty");
        for (const auto& [n, v] : values)
            if (n == 0 || v == 0) throw ParameterError("F table entries must be positive");
        FSpec f;
        f.table_ = std::move(values);
        std::ostringstream os;
        os << "table{";
        bool first = true;
        for (const auto& [n, v] : f.table_) os << (first ? "" : ",") << n << ':' << v, first = false;
        os << '}';
        f.text_ = os.str();
        return f;
    }

    bool is_table() const noexcept { return !table_.empty(); }
    const std::map<std::uint64_t, std::uint64_t>& table_values() const noexcept { return table_; }
    const std::string& text() const noexcept { return text_; }

    std::uint64_t operator()(std::uint64_t n) const {
        if (n == 0) throw ParameterError("F is evaluated on n >= 1");
        if (is_table()) {
            const auto it = table_.find(n);
            if (it == table_.end()) throw DomainError("F table has no entry for n = " + std::to_string(n));
            return it->second;
        }
        std::vector<std::uint64_t> stack;
        for (const Op& op : code_) {
            switch (op.kind) {
            case Op::Lit: stack.push_back(op.value); break;
            case Op::Var: stack.push_back(n); break;
            case Op::Add: {
                const auto b = pop(stack), a = pop(stack);
                if (a > std::numeric_limits<std::uint64_t>::max() - b) overflow();
                stack.push_back(a + b);
                break;
            }
            case Op::Mul: {
                const auto b = pop(stack), a = pop(stack);
                stack.push_back(mul(a, b));
                break;
            }
            case Op::Pow: {
                const auto base = pop(stack);
                std::uint64_t acc = 1;
                for (std::uint64_t k = 0; k < op.value; ++k) acc = mul(acc, base);
                stack.push_back(acc);
                break;
            }
            }
        }
        const std::uint64_t v = stack.back();
        if (v == 0) throw DomainError("F(" + std::to_string(n) + ") = 0; F must be positive");
        return v;
    }

    /// Right end of the metastability window, max(n, F(n)).
    std::uint64_t window_end(std::uint64_t n) const {
        const std::uint64_t f = (*this)(n);
        return f < n ? n : f;
    }

private:
    struct Op {
        enum Kind { Lit, Var, Add, Mul, Pow } kind;
        std::uint64_t value = 0;
    };

    [[noreturn]] static void overflow() { throw DomainError("F evaluation overflows 64 bits"); }

    static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
        if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) overflow();
        return a * b;
    }

    static std::uint64_t pop(std::vector<std::uint64_t>& s) {
        const auto v = s.back();
        s.pop_back();
        return v;
    }

    // expr := term ('+' term)* ; term := factor ('*' factor)* ;
    // factor := atom ('^' INT)? ; atom := INT | 'n' | '(' expr ')'
    struct Parser {
        std::string_view s;
        std::size_t pos = 0;
        std::vector<Op> out;

        std::vector<Op> parse() {
            expr();
            skip();
            if (pos != s.size()) fail("unexpected character");
            if (out.empty()) fail("empty expression");
            return std::move(out);
        }

        [[noreturn]] void fail(const std::string& msg) const { throw ParseError("F: " + msg, 1, pos + 1); }

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }

        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) return ++pos, true;
            return false;
        }

        std::uint64_t integer() {
            skip();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected integer");
            std::uint64_t v = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                const std::uint64_t digit = static_cast<std::uint64_t>(s[pos] - '0');
                if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) fail("integer literal too large");
                v = v * 10 + digit;
                ++pos;
            }
            return v;
        }

        void expr() {
            term();
            while (eat('+')) term(), out.push_back({Op::Add});
        }
        void term() {
            factor();
            while (eat('*')) factor(), out.push_back({Op::Mul});
        }
        void factor() {
            atom();
            if (eat('^')) out.push_back({Op::Pow, integer()});
        }
        void atom() {
            skip();
            if (eat('(')) {
                expr();
                if (!eat(')')) fail("expected ')'");
                return;
            }
            if (eat('n')) {
                out.push_back({Op::Var});
                return;
            }
            out.push_back({Op::Lit, integer()});
        }
    };

    std::vector<Op> code_;
    std::map<std::uint64_t, std::uint64_t> table_;
    std::string text_;
};

}  // namespace geometa
