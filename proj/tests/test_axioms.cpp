#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "geometa/axioms.hpp"

using namespace geometa;

TEST(LinearAxioms, AffineIntervalExact) {
    const Space s = Space::interval(0.0, 3.0);
    const auto pairs = make_pairs(sample_points(s, 200, 5, true));
    const auto grid = default_t_grid(0.5);
    const AxiomReport r = check_linear_axioms(s, pairs, grid, 1e-12);
    EXPECT_LE(r.worst_violation, 1e-12);
    EXPECT_TRUE(r.passed());
    EXPECT_FALSE(r.witness.has_value());
    EXPECT_EQ(r.samples_checked, pairs.size() * grid.size() * (grid.size() + 1));
}

TEST(LinearAxioms, ConstantPathFailsWithWitness) {
    const Space s = Space::interval(0.0, 3.0);
    const std::vector<PointPair> pairs{{Point{0.0}, Point{2.0}}};
    const std::vector<double> grid{0.0, 1.0};
    const AxiomReport r = check_linear_axioms([&](const Point& a, const Point& b) { return s.distance(a, b); },
                                              [](const Point& x, const Point&, double) { return x; }, pairs, grid, 1e-9);
    EXPECT_DOUBLE_EQ(r.worst_violation, 2.0);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->points[0], Point{0.0});
    EXPECT_FALSE(r.passed());
}

TEST(LinearAxioms, BothSupNormStructuresOnSpecialPair) {
    const Space plane = Space::box(Point{-3.0, -3.0}, Point{3.0, 3.0}, Norm::Linf);
    const std::vector<PointPair> pair{{Point{0.0, 0.0}, Point{2.0, 0.0}}};
    const auto grid = dense_t_grid(256);
    for (const Space& s : {plane, plane.with_geodesic(GeodesicKind::SupNormAlternative)})
        EXPECT_LE(check_linear_axioms(s, pair, grid, 1e-12).worst_violation, 1e-12);
}

TEST(LinearAxioms, RandomPairsAllStructures) {
    const std::vector<Space> spaces = {Space::box(3, -1, 1, Norm::L1), Space::box(2, -1, 1, Norm::L2),
                                       Space::ball(2, 2, Norm::Linf), Space::sphere(),
                                       Space::box(2, -3, 3, Norm::Linf).with_geodesic(GeodesicKind::SupNormAlternative)};
    for (const Space& s : spaces) {
        const auto pairs = make_pairs(sample_points(s, 100, 17));
        EXPECT_LE(check_linear_axioms(s, pairs, default_t_grid(), 1e-9).worst_violation, 1e-9) << s.describe();
    }
}

TEST(Hyperbolic, AffineBoxesPass) {
    for (Norm n : {Norm::L1, Norm::L2, Norm::Linf})
        for (std::size_t d = 1; d <= 4; ++d) {
            const Space s = Space::box(d, 0.0, 1.0, n);
            const auto triples = make_triples(sample_points(s, 1500, 3 + d));
            const AxiomReport r = check_hyperbolic_type(s, triples, default_t_grid(), 1e-12);
            EXPECT_LE(r.worst_violation, 1e-12);
            EXPECT_FALSE(r.witness.has_value());
        }
}

TEST(Hyperbolic, SphereLatitudeFamilyFails) {
    const Space s = Space::sphere();
    const auto triples = sphere_latitude_triples(50, 11);
    const std::vector<double> half{0.5};
    const AxiomReport r = check_hyperbolic_type(s, triples, half, 1e-12);
    EXPECT_GT(r.worst_violation, 0.0);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->points[0], (Point{0.0, 0.0, 1.0}));

    // Each triple violates on its own: the midpoint lies further south than x and y.
    for (const auto& tr : triples) {
        const PointTriple one[] = {tr};
        EXPECT_GT(check_hyperbolic_type(s, one, half, 0.0).worst_violation, 0.0);
    }
}

TEST(Hyperbolic, SphereWitnessValueMatchesClosedForm) {
    // p = north pole, x, y at latitude -a, longitudes 0 and g: d(p,x) = d(p,y) = pi/2 + a.
    const double a = 0.4, g = 2.0;
    const Point p{0, 0, 1};
    const Point x{std::cos(a), 0.0, -std::sin(a)};
    const Point y{std::cos(a) * std::cos(g), std::cos(a) * std::sin(g), -std::sin(a)};
    const double mz = -2.0 * std::sin(a) / std::sqrt(2.0 + 2.0 * (std::cos(a) * std::cos(a) * std::cos(g) +
                                                                  std::sin(a) * std::sin(a)));
    const double expected = std::acos(mz) - (std::numbers::pi / 2 + a);
    const PointTriple one[] = {{p, x, y}};
    const std::vector<double> half{0.5};
    EXPECT_NEAR(check_hyperbolic_type(Space::sphere(), one, half, 0.0).worst_violation, expected, 1e-12);
    EXPECT_GT(expected, 0.0);
}

TEST(Hyperbolic, DegenerateTripleIsZero) {
    const Space s = Space::interval(0.0, 3.0);
    const PointTriple one[] = {{Point{1.0}, Point{1.0}, Point{1.0}}};
    const auto grid = default_t_grid();
    EXPECT_EQ(check_hyperbolic_type(s, one, grid, 0.0).worst_violation, 0.0);
}

TEST(Hyperbolic, Preconditions) {
    const Space s = Space::interval(0.0, 3.0);
    const std::vector<PointTriple> none;
    const std::vector<double> grid{0.5}, bad{1.5};
    EXPECT_THROW(check_hyperbolic_type(s, none, grid, 0.0), PreconditionError);
    const PointTriple one[] = {{Point{1.0}, Point{1.0}, Point{2.0}}};
    EXPECT_THROW(check_hyperbolic_type(s, one, bad, 0.0), DomainError);
}

TEST(TGrid, DefaultIncludesLambda) {
    const auto g = default_t_grid(0.3);
    EXPECT_EQ(g.size(), 10u);
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    EXPECT_EQ(default_t_grid(0.5).size(), 9u);
    EXPECT_EQ(dense_t_grid(4).back(), 1.0);
}
