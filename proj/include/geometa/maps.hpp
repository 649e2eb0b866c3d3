#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/point.hpp"
#include "geometa/space.hpp"

namespace geometa {

enum class MapKind { SuzukiToy, Affine, RotationShrink, PiecewiseConstant, Matrix, Table };

inline const char* to_string(MapKind k) {
    switch (k) {
    case MapKind::SuzukiToy: return "suzuki_toy";
    case MapKind::Affine: return "affine";
    case MapKind::RotationShrink: return "rotation_shrink";
    case MapKind::PiecewiseConstant: return "piecewise_constant";
    case MapKind::Matrix: return "matrix";
    case MapKind::Table: return "table";
    }
    return "?";
}

namespace map_kind {

/// T(3) = 1, T(x) = 0 otherwise, on [0,3].
struct SuzukiToy {};

/// x -> c x + b, componentwise.
struct Affine {
    double c;
    Point b;
};

/// x -> factor * R(angle) x in the plane.
struct RotationShrink {
    double angle;
    double factor;
};

/// On an interval: value[i] on [breaks[i-1], breaks[i]) (value[0] left of the
/// first break, the last value includes the right endpoint), except at the
/// jump points, which are matched by exact equality and override the pieces.
struct PiecewiseConstant {
    std::vector<double> breaks;
    std::vector<double> values;
    std::vector<std::pair<double, double>> jumps;
};

/// x -> A x, A row-major dim x dim.
struct Matrix {
    std::size_t dim;
    std::vector<double> entries;
};

/// Explicit finite graph; lookup by exact equality.
struct Table {
    std::shared_ptr<const std::vector<std::pair<Point, Point>>> entries;
};

}  // namespace map_kind

/// A total, possibly discontinuous self-map of a space, with optional claimed
/// parameters for the condition checkers.
class MapUnderTest {
public:
    using Rule = std::variant<map_kind::SuzukiToy, map_kind::Affine, map_kind::RotationShrink,
                              map_kind::PiecewiseConstant, map_kind::Matrix, map_kind::Table>;

    static MapUnderTest suzuki_toy() {
        return MapUnderTest(Space::interval(0.0, 3.0), map_kind::SuzukiToy{});
    }

    static MapUnderTest affine(const Space& space, double c, const Point& b) {
        if (space.kind() == SpaceKind::Sphere) throw KindError("affine maps are not defined on the sphere");
        if (b.dim() != space.dimension()) throw InvalidPointError("offset dimension mismatch");
        return MapUnderTest(space, map_kind::Affine{c, b});
    }

    static MapUnderTest affine(const Space& space, double c, double b = 0.0) {
        Point off = Point::zero(space.dimension());
        for (std::size_t i = 0; i < off.dim(); ++i) off[i] = b;
        return affine(space, c, off);
    }

    static MapUnderTest identity(const Space& space) { return affine(space, 1.0, 0.0); }

    static MapUnderTest constant(const Space& space, const Point& value) {
        space.require_member(value);
        return affine(space, 0.0, value);
    }

    static MapUnderTest rotation_shrink(const Space& space, double angle, double factor) {
        if (space.dimension() != 2 || space.kind() == SpaceKind::Sphere)
            throw KindError("rotation_shrink needs a planar space");
        if (!(factor >= 0.0 && factor <= 1.0)) throw ParameterError("rotation_shrink factor must lie in [0,1]");
        return MapUnderTest(space, map_kind::RotationShrink{angle, factor});
    }

    static MapUnderTest piecewise_constant(const Space& space, std::vector<double> breaks,
                                           std::vector<double> values,
                                           std::vector<std::pair<double, double>> jumps = {}) {
        if (space.kind() != SpaceKind::Interval) throw KindError("piecewise_constant maps live on intervals");
        if (values.size() != breaks.size() + 1) throw ParameterError("piecewise_constant needs breaks+1 values");
        if (!std::is_sorted(breaks.begin(), breaks.end())) throw ParameterError("breaks must be sorted");
        return MapUnderTest(space, map_kind::PiecewiseConstant{std::move(breaks), std::move(values), std::move(jumps)});
    }

    static MapUnderTest matrix(const Space& space, std::vector<std::vector<double>> rows) {
        const std::size_t n = rows.size();
        if (n != space.dimension() || space.kind() == SpaceKind::Sphere)
            throw KindError("matrix size must match the dimension of a linear space");
        map_kind::Matrix m{n, {}};
        for (const auto& r : rows) {
            if (r.size() != n) throw ParameterError("matrix must be square");
            m.entries.insert(m.entries.end(), r.begin(), r.end());
        }
        return MapUnderTest(space, std::move(m));
    }

    static MapUnderTest table(const Space& space, std::vector<std::pair<Point, Point>> entries) {
        if (entries.empty()) throw ParameterError("table map needs at least one entry");
        for (const auto& [x, y] : entries) space.require_member(x), space.require_member(y);
        return MapUnderTest(space, map_kind::Table{std::make_shared<const std::vector<std::pair<Point, Point>>>(
                                       std::move(entries))});
    }

    /// Two-column text file "point image" per line; '#' starts a comment.
    static MapUnderTest load_table(const Space& space, const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open table file " + path);
        std::vector<std::pair<Point, Point>> entries;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double x = 0, y = 0;
            if (!(ls >> x)) continue;
            if (!(ls >> y)) throw ParseError("expected two columns", lineno, 1);
            entries.emplace_back(Point{x}, Point{y});
        }
        return table(space, std::move(entries));
    }

    MapUnderTest with_claims(std::optional<double> lambda, std::optional<double> mu) const {
        MapUnderTest m = *this;
        m.claimed_lambda_ = lambda;
        m.claimed_mu_ = mu;
        return m;
    }

    MapUnderTest with_name(std::string name) const {
        MapUnderTest m = *this;
        m.name_ = std::move(name);
        return m;
    }

    const Space& space() const noexcept { return space_; }
    MapKind kind() const noexcept { return static_cast<MapKind>(rule_.index()); }
    const Rule& rule() const noexcept { return rule_; }
    const std::string& name() const noexcept { return name_; }
    std::optional<double> claimed_lambda() const noexcept { return claimed_lambda_; }
    std::optional<double> claimed_mu() const noexcept { return claimed_mu_; }
    bool is_linear() const noexcept { return kind() == MapKind::Matrix; }

    /// Tx. Throws DomainError when x is outside the space or Tx leaves it.
    Point apply(const Point& x) const {
        space_.require_member(x);
        Point y = apply_unchecked(x);
        if (!space_.contains(y)) {
            std::ostringstream os;
            os << "map " << name_ << " sends " << x << " to " << y << " outside the space";
            throw DomainError(os.str());
        }
        return y;
    }

    Point apply_unchecked(const Point& x) const {
        return std::visit([&](const auto& r) { return eval(r, x); }, rule_);
    }

    /// Jump points and table arguments; samples used by the checkers should contain them.
    std::vector<Point> special_points() const {
        std::vector<Point> pts;
        if (kind() == MapKind::SuzukiToy) pts.push_back(Point{3.0});
        if (const auto* pc = std::get_if<map_kind::PiecewiseConstant>(&rule_)) {
            for (const auto& [x, v] : pc->jumps) pts.push_back(Point{x});
            for (double b : pc->breaks) pts.push_back(Point{b});
        }
        if (const auto* tb = std::get_if<map_kind::Table>(&rule_))
            for (const auto& [x, y] : *tb->entries) pts.push_back(x);
        return pts;
    }

    std::string describe() const {
        std::ostringstream os;
        os << name_;
        std::visit([&](const auto& r) { describe_rule(os, r); }, rule_);
        return os.str();
    }

private:
    MapUnderTest(Space space, Rule rule)
        : space_(std::move(space)), rule_(std::move(rule)), name_(to_string(kind())) {}

    static Point eval(const map_kind::SuzukiToy&, const Point& x) { return Point{x[0] == 3.0 ? 1.0 : 0.0}; }

    static Point eval(const map_kind::Affine& a, const Point& x) {
        Point y = Point::zero(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) y[i] = a.c * x[i] + a.b[i];
        return y;
    }

    static Point eval(const map_kind::RotationShrink& r, const Point& x) {
        const double c = std::cos(r.angle), s = std::sin(r.angle);
        return Point{r.factor * (c * x[0] - s * x[1]), r.factor * (s * x[0] + c * x[1])};
    }

    static Point eval(const map_kind::PiecewiseConstant& pc, const Point& x) {
        for (const auto& [jx, jv] : pc.jumps)
            if (x[0] == jx) return Point{jv};
        const auto it = std::upper_bound(pc.breaks.begin(), pc.breaks.end(), x[0]);
        return Point{pc.values[static_cast<std::size_t>(it - pc.breaks.begin())]};
    }

    static Point eval(const map_kind::Matrix& m, const Point& x) {
        Point y = Point::zero(m.dim);
        for (std::size_t i = 0; i < m.dim; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m.dim; ++j) acc += m.entries[i * m.dim + j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    static Point eval(const map_kind::Table& t, const Point& x) {
        for (const auto& [a, b] : *t.entries)
            if (a == x) return b;
        std::ostringstream os;
        os << "table map is undefined at " << x;
        throw DomainError(os.str());
    }

    static void describe_rule(std::ostream&, const map_kind::SuzukiToy&) {}
    static void describe_rule(std::ostream& os, const map_kind::Affine& a) { os << " c=" << a.c << " b=" << a.b; }
    static void describe_rule(std::ostream& os, const map_kind::RotationShrink& r) {
        os << " angle=" << r.angle << " factor=" << r.factor;
    }
    static void describe_rule(std::ostream& os, const map_kind::PiecewiseConstant& pc) {
        os << " pieces=" << pc.values.size() << " jumps=" << pc.jumps.size();
    }
    static void describe_rule(std::ostream& os, const map_kind::Matrix& m) { os << " dim=" << m.dim; }
    static void describe_rule(std::ostream& os, const map_kind::Table& t) { os << " entries=" << t.entries->size(); }

    Space space_;
    Rule rule_;
    std::string name_;
    std::optional<double> claimed_lambda_;
    std::optional<double> claimed_mu_;
};

}  // namespace geometa
