#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geometa/point.hpp"
#include "geometa/rng.hpp"
#include "geometa/space.hpp"

namespace geometa {

/// Sample tuple achieving a reported worst violation.
struct Witness {
    std::vector<Point> points;
    std::vector<double> params;
    std::string note;
};

struct AxiomReport {
    double worst_violation = 0.0;
    std::optional<Witness> witness;  ///< present iff worst_violation > tolerance
    std::size_t samples_checked = 0;
    double tolerance = 0.0;

    bool passed() const noexcept { return worst_violation <= tolerance; }
};

using PointPair = std::pair<Point, Point>;
using PointTriple = std::array<Point, 3>;

/// {0, 1/8, ..., 1}, plus `extra` (e.g. the lambda under test) when given.
inline std::vector<double> default_t_grid(std::optional<double> extra = std::nullopt) {
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) grid.push_back(k / 8.0);
    if (extra && std::find(grid.begin(), grid.end(), *extra) == grid.end()) {
        grid.push_back(*extra);
        std::sort(grid.begin(), grid.end());
    }
    return grid;
}

/// Uniform grid of `steps + 1` parameters in [0,1].
inline std::vector<double> dense_t_grid(std::size_t steps) {
    std::vector<double> grid;
    for (std::size_t k = 0; k <= steps; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(steps));
    grid.back() = 1.0;
    return grid;
}

/// Linear-structure axioms for an arbitrary metric and geodesic:
///   |d(L_t(x,y), L_t'(x,y)) - |t - t'| d(x,y)|   (isometric embedding)
///   d(L_t(x,y), L_{1-t}(y,x))                      (symmetry)
/// maximised over sample x t_grid x t_grid.
template <class Metric, class Geodesic>
AxiomReport check_linear_axioms(Metric&& d, Geodesic&& geodesic, std::span<const PointPair> sample,
                                std::span<const double> t_grid, double tol) {
    if (sample.empty()) throw PreconditionError("linear-axiom check needs a nonempty sample");
    AxiomReport report;
    report.tolerance = tol;
    Witness best;
    for (const auto& [x, y] : sample) {
        const double dxy = d(x, y);
        std::vector<Point> path;
        path.reserve(t_grid.size());
        for (double t : t_grid) path.push_back(geodesic(x, y, t));

        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double t = t_grid[i];
            const double sym = d(path[i], geodesic(y, x, 1.0 - t));
            ++report.samples_checked;
            if (sym > report.worst_violation) {
                report.worst_violation = sym;
                best = Witness{{x, y}, {t, 1.0 - t}, "symmetry"};
            }
            for (std::size_t j = 0; j < t_grid.size(); ++j) {
                const double expected = std::abs(t - t_grid[j]) * dxy;
                const double v = std::abs(d(path[i], path[j]) - expected);
                ++report.samples_checked;
                if (v > report.worst_violation) {
                    report.worst_violation = v;
                    best = Witness{{x, y}, {t, t_grid[j]}, "isometry"};
                }
            }
        }
    }
    if (report.worst_violation > tol) report.witness = std::move(best);
    return report;
}

inline AxiomReport check_linear_axioms(const Space& space, std::span<const PointPair> sample,
                                       std::span<const double> t_grid, double tol) {
    for (const auto& [x, y] : sample) space.require_member(x), space.require_member(y);
    return check_linear_axioms([&](const Point& a, const Point& b) { return space.distance(a, b); },
                               [&](const Point& a, const Point& b, double t) { return space.geodesic_point(a, b, t); },
                               sample, t_grid, tol);
}

/// Hyperbolic-type condition
///   (d(p, L_t(x,y)) -. (1-t) d(p,x)) -. t d(p,y)
/// maximised over the triples (p, x, y) and t_grid.
inline AxiomReport check_hyperbolic_type(const Space& space, std::span<const PointTriple> sample,
                                         std::span<const double> t_grid, double tol) {
    if (sample.empty()) throw PreconditionError("hyperbolic-type check needs a nonempty sample");
    for (const auto& tr : sample)
        for (const Point& p : tr) space.require_member(p);
    for (double t : t_grid)
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t_grid values must lie in [0,1]");

    AxiomReport report;
    report.tolerance = tol;
    Witness best;
    space.visit_metric([&](auto d) {
        for (const auto& [p, x, y] : sample) {
            const double dpx = d(p, x), dpy = d(p, y);
            for (double t : t_grid) {
                const Point m = space.geodesic_unchecked(x, y, t);
                const double v = std::max(std::max(d(p, m) - (1.0 - t) * dpx, 0.0) - t * dpy, 0.0);
                ++report.samples_checked;
                if (v > report.worst_violation) {
                    report.worst_violation = v;
                    best = Witness{{p, x, y}, {t}, "hyperbolic_type"};
                }
            }
        }
        return 0;
    });
    if (report.worst_violation > tol) report.witness = std::move(best);
    return report;
}

/// Consecutive disjoint pairs/triples from a point sample (helpers for the checkers).
inline std::vector<PointPair> make_pairs(std::span<const Point> pts) {
    std::vector<PointPair> out;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) out.emplace_back(pts[i], pts[i + 1]);
    return out;
}

inline std::vector<PointTriple> make_triples(std::span<const Point> pts) {
    std::vector<PointTriple> out;
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) out.push_back({pts[i], pts[i + 1], pts[i + 2]});
    return out;
}

/// Triples (north pole, x, y) on the unit sphere with x and y distinct points
/// on a common southern latitude, less than half a turn apart in longitude.
inline std::vector<PointTriple> sphere_latitude_triples(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    const Point pole{0.0, 0.0, 1.0};
    auto at = [](double lat, double lon) {
        return Point{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
    };
    std::vector<PointTriple> out;
    out.reserve(count);
    while (out.size() < count) {
        const double lat = -rng.uniform(0.05, 1.5);
        const double lon = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double gap = rng.uniform(0.1, 3.0);
        out.push_back({pole, at(lat, lon), at(lat, lon + gap)});
    }
    return out;
}

}  // namespace geometa
