#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/formula/ast.hpp"
#include "geometa/formula/parser.hpp"

namespace geometa::formula {

namespace builtin_text {

inline void require_unit(const Rational& t, const char* what) {
    if (t < Rational(0) || t > Rational(1)) throw ParameterError(std::string(what) + " must lie in [0,1]");
}

/// d(p, L_t(x,y)) against (1-t) d(p,x) + t d(p,y).
inline std::string hyperbolic_type(const Rational& t) {
    require_unit(t, "hyperbolic_type: t");
    return "sup p . sup x . sup y . (d(p, L[" + t.str() + "](x, y)) -. " + (Rational(1) - t).str() +
           "*d(p, x)) -. " + t.str() + "*d(p, y)";
}

inline std::string condition_D(const Rational& lambda) {
    if (lambda <= Rational(0) || lambda >= Rational(1)) throw ParameterError("condition_D: lambda must lie in (0,1)");
    return "sup x . d(T(x), T(L[" + lambda.str() + "](x, T(x)))) -. " + lambda.str() + "*d(x, T(x))";
}

inline std::string condition_E(const Rational& mu) {
    if (mu < Rational(1)) throw ParameterError("condition_E: mu must be at least 1");
    return "sup x . sup y . (d(x, T(y)) -. " + mu.str() + "*d(x, T(x))) -. d(x, y)";
}

inline std::string sap_axiom_1() { return "sup x . inf y . max(P(y), abs(P(x), d(x, y)))"; }

inline std::string sap_axiom_2() { return "sup x . abs(P(x), inf y . min(P(y) + d(x, y), 1))"; }

/// Both directions of the isometry axiom for the pair (t, t'), combined by max.
inline std::string linear_axiom_a(const Rational& t, const Rational& t2) {
    require_unit(t, "linear_axiom_a: t");
    require_unit(t2, "linear_axiom_a: t'");
    const std::string gap = abs(t - t2).str() + "*d(x, y)";
    const std::string seg = "d(L[" + t.str() + "](x, y), L[" + t2.str() + "](x, y))";
    return "max(sup x . sup y . " + seg + " -. " + gap + ", sup x . sup y . " + gap + " -. " + seg + ")";
}

inline std::string linear_axiom_b(const Rational& t) {
    require_unit(t, "linear_axiom_b: t");
    return "sup x . sup y . d(L[" + t.str() + "](x, y), L[" + (Rational(1) - t).str() + "](y, x))";
}

/// beta + 1 infima over centers x0..x_beta, then the sup over x of the
/// distance to the nearest center minus 1/(k+1).
inline std::string approx_tb(std::size_t beta, std::size_t k) {
    std::string s, dists;
    for (std::size_t i = 0; i <= beta; ++i) {
        s += "inf x" + std::to_string(i) + " . ";
        dists += (i ? ", " : "") + std::string("d(x, x") + std::to_string(i) + ")";
    }
    return s + "sup x . min(" + dists + ") -. " + Rational(1, static_cast<std::int64_t>(k) + 1).str();
}

}  // namespace builtin_text

inline NodePtr hyperbolic_type(const Rational& t) { return parse(builtin_text::hyperbolic_type(t)); }
inline NodePtr condition_D(const Rational& lambda) { return parse(builtin_text::condition_D(lambda)); }
inline NodePtr condition_E(const Rational& mu) { return parse(builtin_text::condition_E(mu)); }
inline NodePtr sap_axiom_1() { return parse(builtin_text::sap_axiom_1()); }
inline NodePtr sap_axiom_2() { return parse(builtin_text::sap_axiom_2()); }
inline NodePtr linear_axiom_a(const Rational& t, const Rational& t2) {
    return parse(builtin_text::linear_axiom_a(t, t2));
}
inline NodePtr linear_axiom_b(const Rational& t) { return parse(builtin_text::linear_axiom_b(t)); }
inline NodePtr approx_tb(std::size_t beta, std::size_t k) { return parse(builtin_text::approx_tb(beta, k)); }

/// Text of a builtin call such as "condition_E(3)" or "linear_axiom_a(1/4, 3/4)".
inline std::string builtin_source(std::string_view call) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    call = trim(call);
    std::string_view name = call;
    std::vector<std::string_view> args;
    if (const auto open = call.find('('); open != std::string_view::npos) {
        if (call.back() != ')') throw ParameterError("builtin call must end with ')'");
        name = trim(call.substr(0, open));
        std::string_view rest = call.substr(open + 1, call.size() - open - 2);
        while (!trim(rest).empty()) {
            const auto comma = rest.find(',');
            args.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    auto want = [&](std::size_t n) {
        if (args.size() != n)
            throw ParameterError("builtin " + std::string(name) + " takes " + std::to_string(n) + " argument(s)");
    };
    auto q = [&](std::size_t i) { return Rational::parse(args[i]); };
    auto count = [&](std::size_t i) {
        const Rational r = q(i);
        if (r.den() != 1 || r.num() < 0) throw ParameterError("builtin argument must be a nonnegative integer");
        return static_cast<std::size_t>(r.num());
    };
    if (name == "hyperbolic_type") return want(1), builtin_text::hyperbolic_type(q(0));
    if (name == "condition_D") return want(1), builtin_text::condition_D(q(0));
    if (name == "condition_E") return want(1), builtin_text::condition_E(q(0));
    if (name == "sap_axiom_1") return want(0), builtin_text::sap_axiom_1();
    if (name == "sap_axiom_2") return want(0), builtin_text::sap_axiom_2();
    if (name == "linear_axiom_a") return want(2), builtin_text::linear_axiom_a(q(0), q(1));
    if (name == "linear_axiom_b") return want(1), builtin_text::linear_axiom_b(q(0));
    if (name == "approx_tb") return want(2), builtin_text::approx_tb(count(0), count(1));
    throw ParameterError("unknown builtin '" + std::string(name) + "'");
}

inline NodePtr builtin(std::string_view call) { return parse(builtin_source(call)); }

}  // namespace geometa::formula
