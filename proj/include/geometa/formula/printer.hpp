#pragma once

#include <string>

#include "geometa/formula/ast.hpp"

namespace geometa::formula {

namespace detail {

inline bool is_sum(NodeKind k) { return k == NodeKind::Add || k == NodeKind::TruncSub; }

inline void print(const Node& n, std::string& out);

inline void print_wrapped(const Node& n, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(n, out);
    if (wrap) out += ')';
}

inline void print_list(const Node& n, std::string& out) {
    out += '(';
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) out += ", ";
        print(*n.kids[i], out);
    }
    out += ')';
}

inline void print(const Node& n, std::string& out) {
    switch (n.kind) {
    case NodeKind::Var: out += n.name; break;
    case NodeKind::Const: out += '@' + n.name; break;
    case NodeKind::MapApply: out += n.name, print_list(n, out); break;
    case NodeKind::GeoApply: out += "L[" + n.q.str() + "]", print_list(n, out); break;
    case NodeKind::Dist: out += 'd', print_list(n, out); break;
    case NodeKind::Pred: out += n.name, print_list(n, out); break;
    case NodeKind::Number: out += n.q.str(); break;
    case NodeKind::Add:
    case NodeKind::TruncSub:
        print_wrapped(*n.kids[0], is_quantifier(n.kids[0]->kind), out);
        out += n.kind == NodeKind::Add ? " + " : " -. ";
        print_wrapped(*n.kids[1], is_sum(n.kids[1]->kind) || is_quantifier(n.kids[1]->kind), out);
        break;
    case NodeKind::Scale:
        out += n.q.str() + "*";
        print_wrapped(*n.kids[0], is_sum(n.kids[0]->kind) || is_quantifier(n.kids[0]->kind), out);
        break;
    case NodeKind::Min: out += "min", print_list(n, out); break;
    case NodeKind::Max: out += "max", print_list(n, out); break;
    case NodeKind::Abs: out += "abs", print_list(n, out); break;
    case NodeKind::Sup:
    case NodeKind::Inf:
        out += n.kind == NodeKind::Sup ? "sup " : "inf ";
        out += n.name + " . ";
        print(*n.kids[0], out);
        break;
    }
}

}  // namespace detail

/// Canonical text; parse(print(a)) is structurally equal to a.
inline std::string print(const NodePtr& n) {
    std::string out;
    detail::print(*n, out);
    return out;
}

}  // namespace geometa::formula
