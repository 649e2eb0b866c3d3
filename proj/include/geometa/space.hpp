#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/point.hpp"
#include "geometa/rng.hpp"

namespace geometa {

enum class SpaceKind { Interval, Box, Ball, Sphere };
enum class Norm { L1, L2, Linf };

/// Linear-structure selector.
///
/// Affine: (1 - t) x + t y.
/// SupNormAlternative: the second geodesic structure on the sup-norm plane,
///   which bends the segment between (0,0) and (2,0) through (1,1).
/// GreatCircle: constant-speed great-circle arcs on the unit sphere.
enum class GeodesicKind { Affine, SupNormAlternative, GreatCircle };

/// Distances below this are treated as zero in all "= 0" checks.
inline constexpr double kZeroDistance = 1e-9;

inline const char* to_string(SpaceKind k) {
    switch (k) {
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Box: return "box";
    case SpaceKind::Ball: return "ball";
    case SpaceKind::Sphere: return "sphere";
    }
    return "?";
}

inline const char* to_string(Norm n) {
    switch (n) {
    case Norm::L1: return "1";
    case Norm::L2: return "2";
    case Norm::Linf: return "inf";
    }
    return "?";
}

inline const char* to_string(GeodesicKind g) {
    switch (g) {
    case GeodesicKind::Affine: return "affine";
    case GeodesicKind::SupNormAlternative: return "sup_alt";
    case GeodesicKind::GreatCircle: return "great_circle";
    }
    return "?";
}

namespace metric {

struct Interval {
    double scale;
    double operator()(const Point& a, const Point& b) const noexcept {
        return scale * std::abs(a[0] - b[0]);
    }
};

struct NormDistance {
    Norm norm;
    std::size_t dim;
    double scale;
    double operator()(const Point& a, const Point& b) const noexcept {
        double acc = 0.0;
        switch (norm) {
        case Norm::L1:
            for (std::size_t i = 0; i < dim; ++i) acc += std::abs(a[i] - b[i]);
            return scale * acc;
        case Norm::L2:
            for (std::size_t i = 0; i < dim; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
            return scale * std::sqrt(acc);
        case Norm::Linf:
            for (std::size_t i = 0; i < dim; ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
            return scale * acc;
        }
        return 0.0;
    }
};

/// Great-circle distance via atan2(|a x b|, a . b), accurate for near and far pairs.
struct GreatCircle {
    double scale;
    double operator()(const Point& a, const Point& b) const noexcept {
        const double cx = a[1] * b[2] - a[2] * b[1];
        const double cy = a[2] * b[0] - a[0] * b[2];
        const double cz = a[0] * b[1] - a[1] * b[0];
        const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
        const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        return scale * std::atan2(cross, dot);
    }
};

}  // namespace metric

/// A bounded pseudometric space together with a selected linear structure.
///
/// Immutable after construction; copies are cheap enough to pass by value.
class Space {
public:
    static Space interval(double a, double b) {
        if (!(a < b)) throw ParameterError("interval requires a < b");
        Space s(SpaceKind::Interval, 1);
        s.lo_ = Point{a};
        s.hi_ = Point{b};
        s.norm_ = Norm::L1;
        s.finish();
        return s;
    }

    static Space box(std::size_t dim, double lo, double hi, Norm norm) {
        Point l = Point::zero(dim), h = Point::zero(dim);
        for (std::size_t i = 0; i < dim; ++i) l[i] = lo, h[i] = hi;
        return box(l, h, norm);
    }

    static Space box(const Point& lo, const Point& hi, Norm norm) {
        if (lo.dim() == 0 || lo.dim() != hi.dim())
            throw ParameterError("box bounds must have equal nonzero dimension");
        for (std::size_t i = 0; i < lo.dim(); ++i)
            if (!(lo[i] < hi[i])) throw ParameterError("box requires lo < hi on every axis");
        Space s(SpaceKind::Box, lo.dim());
        s.lo_ = lo;
        s.hi_ = hi;
        s.norm_ = norm;
        s.finish();
        return s;
    }

    /// Closed ball of the given radius around the origin of R^dim.
    static Space ball(std::size_t dim, double radius, Norm norm) {
        if (!(radius > 0.0)) throw ParameterError("ball radius must be positive");
        if (dim == 0 || dim > kMaxDim) throw ParameterError("ball dimension out of range");
        Space s(SpaceKind::Ball, dim);
        s.radius_ = radius;
        s.norm_ = norm;
        s.finish();
        return s;
    }

    /// Unit 2-sphere in R^3 with the great-circle metric.
    static Space sphere() {
        Space s(SpaceKind::Sphere, 3);
        s.norm_ = Norm::L2;
        s.geodesic_ = GeodesicKind::GreatCircle;
        s.finish();
        return s;
    }

    /// Same space with the metric multiplied by `factor`.
    Space scaled(double factor) const {
        if (!(factor > 0.0)) throw ParameterError("scale factor must be positive");
        Space s = *this;
        s.scale_ *= factor;
        s.finish();
        return s;
    }

    Space with_geodesic(GeodesicKind g) const {
        Space s = *this;
        switch (g) {
        case GeodesicKind::Affine:
            if (kind_ == SpaceKind::Sphere) throw KindError("the sphere has no affine structure");
            break;
        case GeodesicKind::GreatCircle:
            if (kind_ != SpaceKind::Sphere) throw KindError("great-circle structure requires the sphere");
            break;
        case GeodesicKind::SupNormAlternative:
            if (kind_ != SpaceKind::Box || dim_ != 2 || norm_ != Norm::Linf)
                throw KindError("alternative structure requires a 2-d box with the sup norm");
            for (const Point& p : {Point{0.0, 0.0}, Point{2.0, 0.0}, Point{1.0, 1.0}})
                if (!contains(p)) throw KindError("alternative structure requires (0,0), (2,0), (1,1) in the box");
            break;
        }
        s.geodesic_ = g;
        return s;
    }

    /// Explicit diameter bound D; must dominate the computed diameter.
    Space with_diameter_bound(double bound) const {
        if (bound < computed_diameter()) throw ParameterError("diameter bound below the actual diameter");
        Space s = *this;
        s.diameter_ = bound;
        return s;
    }

    /// Extra designated points included by sample_points(include_special = true).
    Space with_special_points(std::vector<Point> extra) const {
        Space s = *this;
        for (Point& p : extra) {
            s.require_member(p);
            if (std::find(s.extra_special_.begin(), s.extra_special_.end(), p) == s.extra_special_.end())
                s.extra_special_.push_back(p);
        }
        return s;
    }

    SpaceKind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return dim_; }
    Norm norm() const noexcept { return norm_; }
    GeodesicKind geodesic() const noexcept { return geodesic_; }
    double scale() const noexcept { return scale_; }
    double diameter_bound() const noexcept { return diameter_; }
    const Point& lower() const noexcept { return lo_; }
    const Point& upper() const noexcept { return hi_; }
    double radius() const noexcept { return radius_; }

    /// Calls `f` with a concrete metric functor so hot loops inline the distance.
    template <class F>
    decltype(auto) visit_metric(F&& f) const {
        switch (kind_) {
        case SpaceKind::Interval: return f(metric::Interval{scale_});
        case SpaceKind::Sphere: return f(metric::GreatCircle{scale_});
        case SpaceKind::Box:
        case SpaceKind::Ball: break;
        }
        return f(metric::NormDistance{norm_, dim_, scale_});
    }

    double distance(const Point& x, const Point& y) const {
        if (x.dim() != dim_ || y.dim() != dim_)
            throw InvalidPointError("point dimension does not match space dimension " + std::to_string(dim_));
        return visit_metric([&](auto d) { return d(x, y); });
    }

    bool contains(const Point& p) const noexcept {
        if (p.dim() != dim_) return false;
        constexpr double tol = 1e-12;
        switch (kind_) {
        case SpaceKind::Interval:
        case SpaceKind::Box:
            for (std::size_t i = 0; i < dim_; ++i) {
                const double slack = tol * (1.0 + std::max(std::abs(lo_[i]), std::abs(hi_[i])));
                if (!(p[i] >= lo_[i] - slack && p[i] <= hi_[i] + slack)) return false;
            }
            return true;
        case SpaceKind::Ball:
            return metric::NormDistance{norm_, dim_, 1.0}(p, Point::zero(dim_)) <= radius_ * (1.0 + tol);
        case SpaceKind::Sphere: {
            const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            return std::abs(n - 1.0) <= tol;
        }
        }
        return false;
    }

    void require_member(const Point& p) const {
        if (p.dim() != dim_)
            throw InvalidPointError("point dimension " + std::to_string(p.dim()) +
                                    " does not match space dimension " + std::to_string(dim_));
        if (!contains(p)) {
            std::ostringstream os;
            os << "point " << p << " lies outside the " << to_string(kind_);
            throw DomainError(os.str());
        }
    }

    /// L(x, y, t): the point at parameter t on the selected geodesic from x to y.
    /// When d(x, y) = 0 the affine and spherical structures return x.
    Point geodesic_point(const Point& x, const Point& y, double t) const {
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic parameter t must lie in [0,1]");
        require_member(x);
        require_member(y);
        return geodesic_unchecked(x, y, t);
    }

    Point geodesic_unchecked(const Point& x, const Point& y, double t) const {
        switch (geodesic_) {
        case GeodesicKind::Affine: return affine_combination(x, y, t);
        case GeodesicKind::SupNormAlternative: return sup_alternative(x, y, t);
        case GeodesicKind::GreatCircle: return great_circle(x, y, t);
        }
        return x;
    }

    /// Designated boundary/special points: interval endpoints, box corners,
    /// the ball centre, the sphere poles, plus any extras.
    std::vector<Point> special_points() const {
        std::vector<Point> pts;
        switch (kind_) {
        case SpaceKind::Interval:
        case SpaceKind::Box: pts = {lo_, hi_}; break;
        case SpaceKind::Ball: pts = {Point::zero(dim_)}; break;
        case SpaceKind::Sphere: pts = {Point{0.0, 0.0, 1.0}, Point{0.0, 0.0, -1.0}}; break;
        }
        for (const Point& p : extra_special_)
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
        return pts;
    }

    std::string describe() const {
        std::ostringstream os;
        os << to_string(kind_);
        switch (kind_) {
        case SpaceKind::Interval: os << '[' << lo_[0] << ',' << hi_[0] << ']'; break;
        case SpaceKind::Box: os << " lo=" << lo_ << " hi=" << hi_ << " norm=" << to_string(norm_); break;
        case SpaceKind::Ball: os << " dim=" << dim_ << " r=" << radius_ << " norm=" << to_string(norm_); break;
        case SpaceKind::Sphere: break;
        }
        if (scale_ != 1.0) os << " scale=" << scale_;
        os << " geodesic=" << to_string(geodesic_);
        return os.str();
    }

private:
    Space(SpaceKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    double computed_diameter() const {
        switch (kind_) {
        case SpaceKind::Interval:
        case SpaceKind::Box: return metric::NormDistance{norm_, dim_, scale_}(lo_, hi_);
        case SpaceKind::Ball: return 2.0 * radius_ * scale_;
        case SpaceKind::Sphere: return std::numbers::pi * scale_;
        }
        return 0.0;
    }

    void finish() { diameter_ = computed_diameter(); }

    Point sup_alternative(const Point& x, const Point& y, double t) const {
        static const Point a{0.0, 0.0};
        static const Point b{2.0, 0.0};
        auto bent = [](double t2) {
            const double s = 2.0 * t2;  // arclength along the path, unscaled sup norm
            return s <= 1.0 ? Point{s, s} : Point{s, 2.0 - s};
        };
        if (x == a && y == b) return bent(t);
        if (x == b && y == a) return bent(1.0 - t);
        return affine_combination(x, y, t);
    }

    static Point great_circle(const Point& x, const Point& y, double t) {
        const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
        Point w{y[0] - dot * x[0], y[1] - dot * x[1], y[2] - dot * x[2]};
        const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        double theta = 0.0;
        if (wn < 1e-12) {
            if (dot > 0.0) return normalized(affine_combination(x, y, t));
            // Antipodal: rotate through the first basis vector not parallel to x.
            // The choice depends on x only up to sign, so L(x,y,t) = L(y,x,1-t).
            for (std::size_t k = 0; k < 3; ++k) {
                if (std::abs(x[k]) < 1.0 - 1e-9) {
                    Point e = Point::zero(3);
                    e[k] = 1.0;
                    w = Point{e[0] - x[k] * x[0], e[1] - x[k] * x[1], e[2] - x[k] * x[2]};
                    break;
                }
            }
            w = normalized(w);
            theta = std::numbers::pi;
        } else {
            for (std::size_t i = 0; i < 3; ++i) w[i] /= wn;
            theta = std::atan2(wn, dot);
        }
        const double c = std::cos(t * theta), s = std::sin(t * theta);
        return normalized(Point{c * x[0] + s * w[0], c * x[1] + s * w[1], c * x[2] + s * w[2]});
    }

    static Point normalized(Point p) {
        const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        for (std::size_t i = 0; i < 3; ++i) p[i] /= n;
        return p;
    }

    SpaceKind kind_;
    std::size_t dim_;
    Point lo_, hi_;
    double radius_ = 0.0;
    Norm norm_ = Norm::L2;
    GeodesicKind geodesic_ = GeodesicKind::Affine;
    double scale_ = 1.0;
    double diameter_ = 0.0;
    std::vector<Point> extra_special_;
};

/// `n` deterministic pseudo-random points of the space. With `include_special`
/// the designated points come first (truncated to n), the rest are random.
inline std::vector<Point> sample_points(const Space& space, std::size_t n, std::uint64_t seed,
                                        bool include_special = false) {
    if (n == 0) throw ParameterError("sample size must be at least 1");
    std::vector<Point> out;
    out.reserve(n);
    if (include_special)
        for (const Point& p : space.special_points())
            if (out.size() < n) out.push_back(p);

    Rng rng(seed);
    const std::size_t dim = space.dimension();
    while (out.size() < n) {
        Point p = Point::zero(dim);
        switch (space.kind()) {
        case SpaceKind::Interval:
        case SpaceKind::Box:
            for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(space.lower()[i], space.upper()[i]);
            break;
        case SpaceKind::Ball:
            do {
                for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(-space.radius(), space.radius());
            } while (!space.contains(p));
            break;
        case SpaceKind::Sphere: {
            double nrm = 0.0;
            do {
                for (std::size_t i = 0; i < 3; ++i) p[i] = rng.normal();
                nrm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            } while (nrm < 1e-6);
            for (std::size_t i = 0; i < 3; ++i) p[i] /= nrm;
            break;
        }
        }
        out.push_back(p);
    }
    return out;
}

/// Regular grid: `per_axis` points per axis including both endpoints
/// (intervals and boxes only). The last point on each axis is exactly the
/// upper bound.
inline std::vector<Point> grid_points(const Space& space, std::size_t per_axis) {
    if (space.kind() != SpaceKind::Interval && space.kind() != SpaceKind::Box)
        throw KindError("grid sampling requires an interval or a box");
    if (per_axis < 2) throw ParameterError("grid needs at least 2 points per axis");
    const std::size_t dim = space.dimension();
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= per_axis;

    auto coord = [&](std::size_t axis, std::size_t k) {
        if (k + 1 == per_axis) return space.upper()[axis];
        const double lo = space.lower()[axis], hi = space.upper()[axis];
        return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(per_axis - 1);
    };

    std::vector<Point> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Point p = Point::zero(dim);
        std::size_t rem = idx;
        for (std::size_t axis = 0; axis < dim; ++axis) {
            p[axis] = coord(axis, rem % per_axis);
            rem /= per_axis;
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace geometa
