#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geometa/formula/rational.hpp"

namespace geometa::formula {

enum class NodeKind {
    // terms
    Var,
    Const,
    MapApply,
    GeoApply,
    // formulas
    Dist,
    Pred,
    Number,
    Add,
    TruncSub,
    Scale,
    Min,
    Max,
    Abs,
    Sup,
    Inf,
};

inline bool is_term(NodeKind k) noexcept { return k <= NodeKind::GeoApply; }
inline bool is_quantifier(NodeKind k) noexcept { return k == NodeKind::Sup || k == NodeKind::Inf; }

struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One node of a formula or term. `name` holds the variable, constant, map,
/// predicate or bound-variable name; `q` the L parameter, scalar or constant.
struct Node {
    NodeKind kind;
    std::string name;
    Rational q;
    std::vector<NodePtr> kids;
    SourcePos pos;
};

/// Structural equality, ignoring source positions.
inline bool same(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.name != b.name || a.q != b.q || a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!same(*a.kids[i], *b.kids[i])) return false;
    return true;
}

inline bool same(const NodePtr& a, const NodePtr& b) { return same(*a, *b); }

namespace ast {

inline NodePtr make(NodeKind k, std::string name, Rational q, std::vector<NodePtr> kids, SourcePos pos = {}) {
    return std::make_shared<const Node>(Node{k, std::move(name), q, std::move(kids), pos});
}

inline NodePtr var(std::string name) { return make(NodeKind::Var, std::move(name), {}, {}); }
inline NodePtr constant(std::string name) { return make(NodeKind::Const, std::move(name), {}, {}); }
inline NodePtr map_apply(std::string sym, NodePtr t) { return make(NodeKind::MapApply, std::move(sym), {}, {std::move(t)}); }
inline NodePtr geo(Rational t, NodePtr a, NodePtr b) {
    return make(NodeKind::GeoApply, "", t, {std::move(a), std::move(b)});
}
inline NodePtr dist(NodePtr a, NodePtr b) { return make(NodeKind::Dist, "", {}, {std::move(a), std::move(b)}); }
inline NodePtr pred(std::string sym, std::vector<NodePtr> args) {
    return make(NodeKind::Pred, std::move(sym), {}, std::move(args));
}
inline NodePtr number(Rational q) { return make(NodeKind::Number, "", q, {}); }
inline NodePtr add(NodePtr a, NodePtr b) { return make(NodeKind::Add, "", {}, {std::move(a), std::move(b)}); }
inline NodePtr trunc_sub(NodePtr a, NodePtr b) {
    return make(NodeKind::TruncSub, "", {}, {std::move(a), std::move(b)});
}
inline NodePtr scale(Rational q, NodePtr a) { return make(NodeKind::Scale, "", q, {std::move(a)}); }
inline NodePtr min_of(std::vector<NodePtr> args) { return make(NodeKind::Min, "", {}, std::move(args)); }
inline NodePtr max_of(std::vector<NodePtr> args) { return make(NodeKind::Max, "", {}, std::move(args)); }
inline NodePtr abs_of(NodePtr a, NodePtr b) { return make(NodeKind::Abs, "", {}, {std::move(a), std::move(b)}); }
inline NodePtr sup(std::string v, NodePtr body) { return make(NodeKind::Sup, std::move(v), {}, {std::move(body)}); }
inline NodePtr inf(std::string v, NodePtr body) { return make(NodeKind::Inf, std::move(v), {}, {std::move(body)}); }

}  // namespace ast

inline void collect_free(const Node& n, std::vector<std::string>& bound, std::set<std::string>& out) {
    if (n.kind == NodeKind::Var) {
        if (std::find(bound.begin(), bound.end(), n.name) == bound.end()) out.insert(n.name);
        return;
    }
    if (is_quantifier(n.kind)) {
        bound.push_back(n.name);
        collect_free(*n.kids[0], bound, out);
        bound.pop_back();
        return;
    }
    for (const auto& k : n.kids) collect_free(*k, bound, out);
}

inline std::set<std::string> free_variables(const NodePtr& n) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free(*n, bound, out);
    return out;
}

inline bool is_closed(const NodePtr& n) { return free_variables(n).empty(); }

}  // namespace geometa::formula
