#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "geometa/axioms.hpp"
#include "geometa/maps.hpp"
#include "geometa/parallel.hpp"
#include "geometa/space.hpp"

namespace geometa {

/// Pairs with lambda d(x,Tx) <= d(x,y) + kAntecedentSlack enter the (C) check.
inline constexpr double kAntecedentSlack = 1e-9;

struct ConditionReport {
    std::string condition;
    double parameter = 0.0;
    double worst_violation = 0.0;
    std::optional<Witness> witness;  ///< present iff the check failed
    std::size_t samples_checked = 0;
    std::size_t samples_skipped = 0;  ///< (C) pairs failing the antecedent
    double tolerance = 0.0;
    bool passed = true;
};

namespace detail {

inline double trunc_sub(double a, double b) noexcept { return a > b ? a - b : 0.0; }

struct PairMax {
    double worst = 0.0;
    std::size_t i = std::numeric_limits<std::size_t>::max();
    std::size_t j = std::numeric_limits<std::size_t>::max();
    std::size_t count = 0;
    std::size_t skipped = 0;
};

inline PairMax combine(PairMax a, const PairMax& b) {
    if (b.worst > a.worst) a.worst = b.worst, a.i = b.i, a.j = b.j;
    a.count += b.count;
    a.skipped += b.skipped;
    return a;
}

/// Images Tx of every sample point (validates membership) and residuals d(x,Tx).
struct Images {
    std::vector<Point> tx;
    std::vector<double> r;
};

inline Images images_of(const MapUnderTest& map, std::span<const Point> sample) {
    Images im;
    im.tx.reserve(sample.size());
    im.r.reserve(sample.size());
    for (const Point& x : sample) {
        im.tx.push_back(map.apply(x));
        im.r.push_back(map.space().distance(x, im.tx.back()));
    }
    return im;
}

inline ConditionReport finish(std::string name, double param, const PairMax& m, double tol,
                              std::span<const Point> sample, bool pair_witness, std::string note) {
    ConditionReport rep;
    rep.condition = std::move(name);
    rep.parameter = param;
    rep.worst_violation = m.worst;
    rep.samples_checked = m.count;
    rep.samples_skipped = m.skipped;
    rep.tolerance = tol;
    rep.passed = m.worst <= tol;
    if (!rep.passed) {
        Witness w;
        w.points.push_back(sample[m.i]);
        if (pair_witness) w.points.push_back(sample[m.j]);
        w.note = std::move(note);
        rep.witness = std::move(w);
    }
    return rep;
}

inline void require_nonempty(std::span<const Point> sample) {
    if (sample.empty()) throw PreconditionError("condition check needs a nonempty sample");
}

/// Shared kernel of the (C_lambda) check and the nonexpansiveness check.
inline PairMax condition_c_kernel(const MapUnderTest& map, double lambda, std::span<const Point> sample,
                                  unsigned workers) {
    const Images im = images_of(map, sample);
    const std::size_t n = sample.size();
    return map.space().visit_metric([&](auto d) {
        return parallel_reduce(
            n, workers, PairMax{},
            [&](std::size_t b, std::size_t e) {
                PairMax m;
                for (std::size_t i = b; i < e; ++i) {
                    const Point& x = sample[i];
                    const double lhs = lambda * im.r[i];
                    for (std::size_t j = 0; j < n; ++j) {
                        const double dxy = d(x, sample[j]);
                        if (!(lhs <= dxy + kAntecedentSlack)) {
                            ++m.skipped;
                            continue;
                        }
                        ++m.count;
                        const double v = trunc_sub(d(im.tx[i], im.tx[j]), dxy);
                        if (v > m.worst) m.worst = v, m.i = i, m.j = j;
                    }
                }
                return m;
            },
            [](PairMax a, const PairMax& b) { return combine(std::move(a), b); });
    });
}

}  // namespace detail

/// Condition (E_mu): max over ordered sample pairs of (d(x,Ty) -. mu d(x,Tx)) -. d(x,y).
inline ConditionReport check_condition_E(const MapUnderTest& map, double mu, std::span<const Point> sample,
                                         double tol, unsigned workers = default_workers()) {
    if (!(mu >= 1.0)) throw ParameterError("condition (E_mu) requires mu >= 1");
    detail::require_nonempty(sample);
    const detail::Images im = detail::images_of(map, sample);
    const std::size_t n = sample.size();
    const detail::PairMax m = map.space().visit_metric([&](auto d) {
        return parallel_reduce(
            n, workers, detail::PairMax{},
            [&](std::size_t b, std::size_t e) {
                detail::PairMax pm;
                for (std::size_t i = b; i < e; ++i) {
                    const Point& x = sample[i];
                    const double bound = mu * im.r[i];
                    for (std::size_t j = 0; j < n; ++j) {
                        const double v = detail::trunc_sub(detail::trunc_sub(d(x, im.tx[j]), bound), d(x, sample[j]));
                        if (v > pm.worst) pm.worst = v, pm.i = i, pm.j = j;
                    }
                    pm.count += n;
                }
                return pm;
            },
            [](detail::PairMax a, const detail::PairMax& b) { return detail::combine(std::move(a), b); });
    });
    return detail::finish("E", mu, m, tol, sample, true, "(x, y)");
}

/// Condition (C_lambda) as a guarded implication: pairs failing
/// lambda d(x,Tx) <= d(x,y) (up to kAntecedentSlack) are skipped, the rest
/// contribute d(Tx,Ty) -. d(x,y).
inline ConditionReport check_condition_C(const MapUnderTest& map, double lambda, std::span<const Point> sample,
                                         double tol, unsigned workers = default_workers()) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("condition (C_lambda) requires lambda in (0,1)");
    detail::require_nonempty(sample);
    return detail::finish("C", lambda, detail::condition_c_kernel(map, lambda, sample, workers), tol, sample, true,
                          "(x, y)");
}

/// Nonexpansiveness d(Tx,Ty) <= d(x,y), i.e. (C_0).
inline ConditionReport check_nonexpansive(const MapUnderTest& map, std::span<const Point> sample, double tol,
                                          unsigned workers = default_workers()) {
    detail::require_nonempty(sample);
    return detail::finish("nonexpansive", 0.0, detail::condition_c_kernel(map, 0.0, sample, workers), tol, sample,
                          true, "(x, y)");
}

namespace detail {

inline PairMax condition_d_scan(const MapUnderTest& map, double lambda, std::span<const Point> sample,
                                const Images& im) {
    const Space& space = map.space();
    PairMax m;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const Point step = space.geodesic_point(sample[i], im.tx[i], lambda);
        const Point t_step = map.apply(step);
        const double v = trunc_sub(space.distance(im.tx[i], t_step), lambda * im.r[i]);
        ++m.count;
        if (v > m.worst) m.worst = v, m.i = i, m.j = i;
    }
    return m;
}

}  // namespace detail

/// Condition (D_lambda): max over x of d(Tx, T L(x,Tx,lambda)) -. lambda d(x,Tx).
inline ConditionReport check_condition_D(const MapUnderTest& map, double lambda, std::span<const Point> sample,
                                         double tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("condition (D_lambda) requires lambda in (0,1)");
    detail::require_nonempty(sample);
    const detail::Images im = detail::images_of(map, sample);
    return detail::finish("D", lambda, detail::condition_d_scan(map, lambda, sample, im), tol, sample, false, "x");
}

/// The (D_lambda) inequality for every lambda of the grid; the witness carries
/// the offending lambda as its parameter.
inline ConditionReport check_directional_nonexpansive(const MapUnderTest& map, std::span<const double> lambda_grid,
                                                      std::span<const Point> sample, double tol) {
    detail::require_nonempty(sample);
    if (lambda_grid.empty()) throw PreconditionError("lambda grid is empty");
    for (double l : lambda_grid)
        if (!(l >= 0.0 && l <= 1.0)) throw ParameterError("lambda grid values must lie in [0,1]");
    const detail::Images im = detail::images_of(map, sample);
    detail::PairMax best;
    double best_lambda = 0.0;
    for (double l : lambda_grid) {
        const detail::PairMax m = detail::condition_d_scan(map, l, sample, im);
        if (m.worst > best.worst) best_lambda = l;
        best = detail::combine(best, m);
    }
    ConditionReport rep = detail::finish("directional", 0.0, best, tol, sample, false, "x");
    if (rep.witness) rep.witness->params.push_back(best_lambda);
    return rep;
}

/// max over x of d(x0,Tx) -. d(x0,x), for an approximate fixed point x0.
inline ConditionReport check_quasi_nonexpansive_at(const MapUnderTest& map, const Point& fixed_candidate,
                                                   std::span<const Point> sample, double tol) {
    detail::require_nonempty(sample);
    const Space& space = map.space();
    const double res = space.distance(fixed_candidate, map.apply(fixed_candidate));
    if (!(res <= tol)) {
        std::ostringstream os;
        os << "candidate " << fixed_candidate << " is not an approximate fixed point: d(p,Tp) = " << res;
        throw PreconditionError(os.str());
    }
    detail::PairMax m;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double v = detail::trunc_sub(space.distance(fixed_candidate, map.apply(sample[i])),
                                           space.distance(fixed_candidate, sample[i]));
        ++m.count;
        if (v > m.worst) m.worst = v, m.i = i, m.j = i;
    }
    ConditionReport rep = detail::finish("quasi_nonexpansive", 0.0, m, tol, sample, false, "x");
    if (rep.witness) rep.witness->points.insert(rep.witness->points.begin(), fixed_candidate);
    return rep;
}

/// Least grid value for which `check(value)` passes, scanning the grid in order.
template <class Check>
std::optional<double> grid_search(std::span<const double> grid, Check&& check) {
    for (double v : grid)
        if (check(v).passed) return v;
    return std::nullopt;
}

/// Sample with the map's special points (and the space's) in front.
inline std::vector<Point> checker_sample(const MapUnderTest& map, std::vector<Point> base) {
    std::vector<Point> out;
    for (const Point& p : map.space().special_points())
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    for (const Point& p : map.special_points())
        if (map.space().contains(p) && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    const std::size_t n_special = out.size();
    for (Point& p : base)
        if (std::find(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n_special), p) ==
            out.begin() + static_cast<std::ptrdiff_t>(n_special))
            out.push_back(p);
    return out;
}

}  // namespace geometa
