#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geometa/conditions.hpp"
#include "geometa/maps.hpp"
#include "geometa/space.hpp"

namespace geometa {

/// Default upper limit on trace length.
inline constexpr std::size_t kDefaultTraceCap = 10000;

/// Pairs (i, n) whose amplification (1 - lambda)^(-n) exceeds this are skipped.
inline constexpr double kGoebelKirkGuard = 1e12;

/// A lambda-Mann iteration x_{n+1} = L(x_n, T x_n, lambda).
///
/// All vectors are 0-based: points[k] is x_{k+1}. images[k] = T x_{k+1},
/// residuals[k] = d(x_{k+1}, T x_{k+1}), steps[k] = d(x_{k+1}, x_{k+2}).
struct IterationTrace {
    double lambda = 0.5;
    std::vector<Point> points;
    std::vector<Point> images;
    std::vector<double> residuals;
    std::vector<double> steps;

    std::size_t size() const noexcept { return points.size(); }
    /// 1-based accessors.
    const Point& x(std::size_t n) const { return points.at(n - 1); }
    const Point& y(std::size_t n) const { return images.at(n - 1); }
    double r(std::size_t n) const { return residuals.at(n - 1); }
};

inline IterationTrace mann_iterate(const MapUnderTest& map, const Point& x1, double lambda, std::size_t length,
                                   std::size_t max_length = kDefaultTraceCap) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("Mann iteration requires lambda in (0,1)");
    if (length < 2) throw PreconditionError("trace length must be at least 2");
    if (length > max_length)
        throw ParameterError("trace length " + std::to_string(length) + " exceeds cap " + std::to_string(max_length));
    const Space& space = map.space();
    space.require_member(x1);

    IterationTrace tr;
    tr.lambda = lambda;
    tr.points.reserve(length);
    tr.images.reserve(length);
    tr.residuals.reserve(length);
    tr.steps.reserve(length);

    Point x = x1;
    for (std::size_t n = 1; n <= length; ++n) {
        Point tx;
        try {
            tx = map.apply(x);
        } catch (const DomainError& e) {
            throw DomainError("iteration index " + std::to_string(n) + ": " + e.what());
        }
        Point next = space.geodesic_point(x, tx, lambda);
        if (!space.contains(next))
            throw DomainError("iteration index " + std::to_string(n + 1) + ": iterate left the space");
        tr.residuals.push_back(space.distance(x, tx));
        tr.steps.push_back(space.distance(x, next));
        tr.points.push_back(x);
        tr.images.push_back(tx);
        x = next;
    }
    return tr;
}

struct GkReport {
    double worst_violation = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  ///< (i, n), 1-based
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped = 0;  ///< over the amplification guard
    double tolerance = 0.0;

    bool passed() const noexcept { return worst_violation <= tolerance; }
};

/// Goebel-Kirk inequality along a trace, with y_n = T x_n:
///   (1 + n lambda) d(x_i,y_i)
///     <= d(x_i, y_{i+n}) + (1 - lambda)^(-n) (d(x_i,y_i) - d(x_{i+n},y_{i+n}))
/// Reports the largest lhs - rhs over all 1 <= i, 1 <= n, i + n <= N.
/// worst_violation may be negative when every pair holds with slack.
inline GkReport verify_goebel_kirk(const Space& space, const IterationTrace& trace, double tol,
                                   double guard = kGoebelKirkGuard) {
    const std::size_t N = trace.size();
    if (N < 3) throw PreconditionError("Goebel-Kirk verification needs a trace of length >= 3");
    const double lambda = trace.lambda;
    const double amp = 1.0 / (1.0 - lambda);

    GkReport rep;
    rep.tolerance = tol;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    space.visit_metric([&](auto d) {
        for (std::size_t i = 1; i < N; ++i) {
            const double ri = trace.residuals[i - 1];
            double factor = 1.0;
            for (std::size_t n = 1; i + n <= N; ++n) {
                factor *= amp;
                if (factor > guard) {
                    rep.pairs_skipped += N - i - n + 1;
                    break;
                }
                const double lhs = (1.0 + static_cast<double>(n) * lambda) * ri;
                const double rhs = d(trace.points[i - 1], trace.images[i + n - 1]) +
                                   factor * (ri - trace.residuals[i + n - 1]);
                const double v = lhs - rhs;
                ++rep.pairs_checked;
                if (v > rep.worst_violation) {
                    rep.worst_violation = v;
                    rep.witness = std::pair{i, n};
                }
            }
        }
        return 0;
    });
    if (rep.pairs_checked == 0) rep.worst_violation = 0.0;
    return rep;
}

/// First 1-based index n with d(x_n, T x_n) <= tol.
inline std::optional<std::pair<std::size_t, Point>> detect_fixed_point(const IterationTrace& trace, double tol) {
    for (std::size_t k = 0; k < trace.size(); ++k)
        if (trace.residuals[k] <= tol) return std::pair{k + 1, trace.points[k]};
    return std::nullopt;
}

/// Fejer monotonicity toward a candidate limit: max over n of
/// d(p, x_{n+1}) -. d(p, x_n).
inline ConditionReport check_fejer_monotone(const MapUnderTest& map, const IterationTrace& trace,
                                            const Point& limit_candidate, double tol) {
    const Space& space = map.space();
    const double res = space.distance(limit_candidate, map.apply(limit_candidate));
    if (!(res <= tol)) {
        std::ostringstream os;
        os << "limit candidate " << limit_candidate << " is not an approximate fixed point: d(p,Tp) = " << res;
        throw PreconditionError(os.str());
    }
    ConditionReport rep;
    rep.condition = "fejer";
    rep.tolerance = tol;
    std::size_t worst_n = 0;
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        const double v = detail::trunc_sub(space.distance(limit_candidate, trace.points[k + 1]),
                                           space.distance(limit_candidate, trace.points[k]));
        ++rep.samples_checked;
        if (v > rep.worst_violation) rep.worst_violation = v, worst_n = k + 1;
    }
    rep.passed = rep.worst_violation <= tol;
    if (!rep.passed)
        rep.witness = Witness{{trace.points[worst_n - 1], trace.points[worst_n]}, {static_cast<double>(worst_n)}, "n"};
    return rep;
}

/// A_n f = (1/n) sum_{m<n} T^m f for a linear (matrix) operator.
inline Point ergodic_average(const MapUnderTest& op, const Point& f, std::size_t n) {
    if (!op.is_linear()) throw KindError("ergodic average requires a matrix operator");
    if (n == 0) throw ParameterError("ergodic average requires n >= 1");
    if (f.dim() != op.space().dimension()) throw InvalidPointError("point dimension mismatch");
    Point sum = Point::zero(f.dim());
    Point term = f;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < f.dim(); ++i) sum[i] += term[i];
        if (m + 1 < n) term = op.apply_unchecked(term);
    }
    for (std::size_t i = 0; i < f.dim(); ++i) sum[i] /= static_cast<double>(n);
    return sum;
}

}  // namespace geometa
