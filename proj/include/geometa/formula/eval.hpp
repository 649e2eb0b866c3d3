#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/formula/ast.hpp"
#include "geometa/maps.hpp"
#include "geometa/parallel.hpp"
#include "geometa/space.hpp"

namespace geometa::formula {

using Predicate = std::function<double(std::span<const Point>)>;
using Bindings = std::map<std::string, Point>;

/// Interpretation of the symbols of a formula. Quantifiers range over `sample`.
struct FiniteStructure {
    Space space;
    std::map<std::string, MapUnderTest> maps;
    std::map<std::string, Predicate> predicates;
    std::vector<Point> sample;
    std::map<std::string, Point> constants;
};

/// P(x) = min over the set of d(x, c).
inline Predicate distance_to_set(const Space& space, std::vector<Point> set) {
    return [space, set = std::move(set)](std::span<const Point> args) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& c : set) best = std::min(best, space.distance(args[0], c));
        return best;
    };
}

struct EvalResult {
    double value = 0.0;
    /// Bindings achieving the outermost run of quantifiers, outermost first.
    std::vector<std::pair<std::string, Point>> witnesses;
};

namespace detail {

inline std::string where(const Node& n) {
    return n.pos.line ? " at " + std::to_string(n.pos.line) + ":" + std::to_string(n.pos.column) : std::string();
}

class Evaluator {
public:
    Evaluator(const FiniteStructure& s, const Bindings& b) : s_(s) {
        for (const auto& [k, v] : b) env_.emplace_back(k, v);
    }

    Point term(const Node& n) {
        switch (n.kind) {
        case NodeKind::Var:
            for (auto it = env_.rbegin(); it != env_.rend(); ++it)
                if (it->first == n.name) return it->second;
            throw EvaluationError("unbound variable '" + n.name + "'" + where(n));
        case NodeKind::Const: {
            const auto it = s_.constants.find(n.name);
            if (it == s_.constants.end()) throw EvaluationError("unknown constant '@" + n.name + "'" + where(n));
            return it->second;
        }
        case NodeKind::MapApply: {
            const auto it = s_.maps.find(n.name);
            if (it == s_.maps.end()) throw EvaluationError("unknown map symbol '" + n.name + "'" + where(n));
            const Point x = term(*n.kids[0]);
            try {
                return it->second.apply(x);
            } catch (const Error& e) {
                throw EvaluationError(std::string(e.what()) + where(n));
            }
        }
        case NodeKind::GeoApply: {
            const Point a = term(*n.kids[0]), b = term(*n.kids[1]);
            try {
                return s_.space.geodesic_point(a, b, n.q.value());
            } catch (const Error& e) {
                throw EvaluationError(std::string(e.what()) + where(n));
            }
        }
        default: throw EvaluationError("formula used where a term is expected" + where(n));
        }
    }

    double formula(const Node& n) {
        switch (n.kind) {
        case NodeKind::Dist: {
            const Point a = term(*n.kids[0]), b = term(*n.kids[1]);
            try {
                return s_.space.distance(a, b);
            } catch (const Error& e) {
                throw EvaluationError(std::string(e.what()) + where(n));
            }
        }
        case NodeKind::Pred: {
            const auto it = s_.predicates.find(n.name);
            if (it == s_.predicates.end()) throw EvaluationError("unknown predicate '" + n.name + "'" + where(n));
            std::vector<Point> args;
            for (const auto& k : n.kids) args.push_back(term(*k));
            return it->second(args);
        }
        case NodeKind::Number: return n.q.value();
        case NodeKind::Add: return formula(*n.kids[0]) + formula(*n.kids[1]);
        case NodeKind::TruncSub: return std::max(formula(*n.kids[0]) - formula(*n.kids[1]), 0.0);
        case NodeKind::Scale: return n.q.value() * formula(*n.kids[0]);
        case NodeKind::Min:
        case NodeKind::Max: {
            double v = formula(*n.kids[0]);
            for (std::size_t i = 1; i < n.kids.size(); ++i)
                v = n.kind == NodeKind::Min ? std::min(v, formula(*n.kids[i])) : std::max(v, formula(*n.kids[i]));
            return v;
        }
        case NodeKind::Abs: return std::abs(formula(*n.kids[0]) - formula(*n.kids[1]));
        case NodeKind::Sup:
        case NodeKind::Inf: return quantifier(n, 0, s_.sample.size(), nullptr).value;
        default: throw EvaluationError("term used where a formula is expected" + where(n));
        }
    }

    /// Best value of a quantifier over sample[begin, end); optionally records the
    /// witnesses of the nested quantifier prefix.
    EvalResult quantifier(const Node& n, std::size_t begin, std::size_t end, std::vector<std::pair<std::string, Point>>* ws) {
        if (s_.sample.empty()) throw EvaluationError("quantifier over an empty sample" + where(n));
        const bool is_sup = n.kind == NodeKind::Sup;
        EvalResult best;
        best.value = is_sup ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        env_.emplace_back(n.name, Point{});
        for (std::size_t i = begin; i < end; ++i) {
            env_.back().second = s_.sample[i];
            std::vector<std::pair<std::string, Point>> inner;
            const Node& body = *n.kids[0];
            const double v = ws && is_quantifier(body.kind)
                                 ? quantifier(body, 0, s_.sample.size(), &inner).value
                                 : formula(body);
            if (is_sup ? v > best.value : v < best.value) {
                best.value = v;
                if (ws) {
                    best.witnesses = {{n.name, s_.sample[i]}};
                    best.witnesses.insert(best.witnesses.end(), inner.begin(), inner.end());
                }
            }
        }
        env_.pop_back();
        if (ws) *ws = best.witnesses;
        return best;
    }

private:
    const FiniteStructure& s_;
    std::vector<std::pair<std::string, Point>> env_;
};

}  // namespace detail

/// Value of the formula with witnesses for its leading quantifier prefix. The
/// outermost quantifier is split across `workers` threads; the reduction
/// keeps the earliest sample index on ties, so the result is independent of
/// the worker count.
inline EvalResult evaluate_with_witness(const NodePtr& ast, const FiniteStructure& structure,
                                        const Bindings& bindings = {}, unsigned workers = default_workers()) {
    if (!is_quantifier(ast->kind)) {
        detail::Evaluator ev(structure, bindings);
        return {ev.formula(*ast), {}};
    }
    if (structure.sample.empty()) throw EvaluationError("quantifier over an empty sample");
    struct Partial {
        EvalResult r;
        bool set = false;
        std::exception_ptr error;
    };
    const bool is_sup = ast->kind == NodeKind::Sup;
    Partial total = parallel_reduce(
        structure.sample.size(), workers, Partial{},
        [&](std::size_t b, std::size_t e) {
            Partial p;
            if (b == e) return p;
            try {
                detail::Evaluator ev(structure, bindings);
                std::vector<std::pair<std::string, Point>> ws;
                p.r = ev.quantifier(*ast, b, e, &ws);
                p.set = true;
            } catch (...) {
                p.error = std::current_exception();
            }
            return p;
        },
        [is_sup](Partial a, Partial b) {
            if (a.error) return a;
            if (b.error) return b;
            if (!a.set) return b;
            if (b.set && (is_sup ? b.r.value > a.r.value : b.r.value < a.r.value)) return b;
            return a;
        });
    if (total.error) std::rethrow_exception(total.error);
    return total.r;
}

inline double evaluate(const NodePtr& ast, const FiniteStructure& structure, const Bindings& bindings = {},
                       unsigned workers = default_workers()) {
    return evaluate_with_witness(ast, structure, bindings, workers).value;
}

}  // namespace geometa::formula
