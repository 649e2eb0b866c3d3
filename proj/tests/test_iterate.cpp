#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "geometa/conditions.hpp"
#include "geometa/iterate.hpp"
#include "oracles.hpp"

using namespace geometa;

namespace {
const MapUnderTest toy = MapUnderTest::suzuki_toy();
}

TEST(Mann, SuzukiTraceMatchesHandIteration) {
    const auto tr = mann_iterate(toy, Point{3.0}, 0.5, 30);
    const auto xs = oracle::toy_trace(3.0, 0.5, 30);
    const auto rs = oracle::toy_residuals(xs);
    ASSERT_EQ(tr.size(), 30u);
    EXPECT_EQ(tr.x(2)[0], 2.0);
    EXPECT_EQ(tr.x(3)[0], 1.0);
    EXPECT_EQ(tr.x(4)[0], 0.5);
    for (std::size_t n = 1; n <= 30; ++n) {
        EXPECT_NEAR(tr.x(n)[0], xs[n - 1], 1e-12);
        EXPECT_NEAR(tr.r(n), rs[n - 1], 1e-12);
        if (n >= 3) { EXPECT_NEAR(tr.x(n)[0], std::pow(2.0, 3.0 - static_cast<double>(n)), 1e-12); }
        if (n >= 2) { EXPECT_NEAR(tr.r(n), tr.x(n)[0], 1e-12); }
    }
    EXPECT_EQ(tr.r(1), 2.0);
}

TEST(Mann, StepIdentity) {
    const Space disk = Space::ball(2, 1.0, Norm::L2);
    const std::vector<IterationTrace> traces = {
        mann_iterate(toy, Point{3.0}, 0.5, 100),
        mann_iterate(toy, Point{2.2}, 0.3, 100),
        mann_iterate(MapUnderTest::rotation_shrink(disk, 1.0, 0.9), Point{0.6, 0.2}, 0.7, 200),
        mann_iterate(MapUnderTest::affine(Space::box(3, -1, 1, Norm::L1), 0.4, 0.1), Point{1.0, -1.0, 0.5}, 0.2, 200),
    };
    for (const auto& tr : traces)
        for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_NEAR(tr.steps[k], tr.lambda * tr.residuals[k], 1e-9);
}

TEST(Mann, FixedStartAndAffine) {
    const auto fixed = mann_iterate(toy, Point{0.0}, 0.5, 10);
    for (std::size_t n = 1; n <= 10; ++n) {
        EXPECT_EQ(fixed.x(n), Point{0.0});
        EXPECT_EQ(fixed.r(n), 0.0);
    }
    const auto aff = mann_iterate(MapUnderTest::affine(Space::interval(0, 3), 0.5, 0.0), Point{1.0}, 0.5, 20);
    for (std::size_t n = 1; n < 20; ++n) EXPECT_NEAR(aff.x(n + 1)[0], 0.75 * aff.x(n)[0], 1e-15);
}

TEST(Mann, Errors) {
    EXPECT_THROW(mann_iterate(toy, Point{3.0}, 1.0, 10), ParameterError);
    EXPECT_THROW(mann_iterate(toy, Point{3.0}, 0.5, 1), PreconditionError);
    EXPECT_THROW(mann_iterate(toy, Point{4.0}, 0.5, 10), Error);
    EXPECT_THROW(mann_iterate(toy, Point{3.0}, 0.5, 20, 10), ParameterError);
    const auto escape = MapUnderTest::table(Space::interval(0, 3), {{Point{1.0}, Point{2.0}}});
    try {
        mann_iterate(escape, Point{1.0}, 0.5, 5);
        FAIL() << "expected a domain error";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos) << e.what();
    }
}

TEST(GoebelKirk, SuzukiTrace) {
    const auto tr = mann_iterate(toy, Point{3.0}, 0.5, 30);
    const auto rep = verify_goebel_kirk(toy.space(), tr, 1e-6);
    EXPECT_LE(rep.worst_violation, 1e-6);
    EXPECT_TRUE(rep.passed());
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < 30; ++i) pairs += 30 - i;
    EXPECT_EQ(rep.pairs_checked + rep.pairs_skipped, pairs);
    EXPECT_EQ(rep.pairs_skipped, 0u);
}

TEST(GoebelKirk, GuardSkipsLargeAmplification) {
    const auto tr = mann_iterate(toy, Point{3.0}, 0.5, 60);
    const auto rep = verify_goebel_kirk(toy.space(), tr, 1e-6);
    // 2^n > 1e12 from n = 40 onward.
    std::size_t expected = 0;
    for (std::size_t i = 1; i < 60; ++i)
        for (std::size_t n = 40; i + n <= 60; ++n) ++expected;
    EXPECT_EQ(rep.pairs_skipped, expected);
    EXPECT_TRUE(rep.passed());
}

TEST(GoebelKirk, ConstantTraceAndOneStepHyperbolicity) {
    const auto c = mann_iterate(toy, Point{0.0}, 0.5, 10);
    const auto rep = verify_goebel_kirk(toy.space(), c, 0.0);
    EXPECT_LE(rep.worst_violation, 0.0);

    // n = 1: d(x_{i+1}, y_{i+1}) <= (1-l) d(x_i, y_{i+1}) + l d(x_i, x_{i+1}), direct on the toy trace.
    const auto tr = mann_iterate(toy, Point{3.0}, 0.5, 30);
    const double l = tr.lambda;
    for (std::size_t i = 1; i < 30; ++i) {
        const double lhs = tr.r(i + 1);
        const double rhs = (1 - l) * std::abs(tr.x(i)[0] - tr.y(i + 1)[0]) + l * std::abs(tr.x(i)[0] - tr.x(i + 1)[0]);
        EXPECT_LE(lhs, rhs + 1e-12);
    }
    EXPECT_THROW(verify_goebel_kirk(toy.space(), mann_iterate(toy, Point{3.0}, 0.5, 2), 0.0), PreconditionError);
}

TEST(GoebelKirk, DPassingBuiltinsHaveNoViolation) {
    const Space iv = Space::interval(0, 3);
    const Space disk = Space::ball(2, 1.0, Norm::L2);
    struct Case {
        MapUnderTest map;
        Point x1;
        double lambda;
    };
    const std::vector<Case> cases = {
        {toy, Point{3.0}, 0.5},
        {toy, Point{3.0}, 0.75},
        {MapUnderTest::affine(iv, 0.5, 0.5), Point{3.0}, 0.3},
        {MapUnderTest::rotation_shrink(disk, 2.0, 0.95), Point{0.9, 0.0}, 0.5},
        {MapUnderTest::piecewise_constant(iv, {}, {0.0}, {{2.0, 0.6}}), Point{2.0}, 0.5},
    };
    for (const auto& c : cases) {
        const auto tr = mann_iterate(c.map, c.x1, c.lambda, 200);
        ASSERT_TRUE(check_condition_D(c.map, c.lambda, tr.points, 1e-9).passed) << c.map.describe();
        EXPECT_LE(verify_goebel_kirk(c.map.space(), tr, 1e-6).worst_violation, 1e-6) << c.map.describe();
    }
}

TEST(FixedPoint, Detection) {
    const auto tr = mann_iterate(toy, Point{3.0}, 0.5, 30);
    const auto fp = detect_fixed_point(tr, 1e-6);
    ASSERT_TRUE(fp.has_value());
    // x_n = 2^(3-n) <= 1e-6 first at n = 23 (2^-20 ~ 9.5e-7; 2^-19 ~ 1.9e-6).
    EXPECT_EQ(fp->first, 23u);
    EXPECT_EQ(fp->second[0], std::ldexp(1.0, -20));
    for (std::size_t n = 1; n <= 30; ++n)
        if (tr.r(n) <= 1e-6) {
            EXPECT_EQ(n, fp->first);
            break;
        }
    EXPECT_EQ(detect_fixed_point(mann_iterate(toy, Point{0.0}, 0.5, 5), 1e-6)->first, 1u);
    EXPECT_FALSE(detect_fixed_point(mann_iterate(toy, Point{3.0}, 0.5, 10), 1e-6).has_value());
}

TEST(Fejer, Cases) {
    const auto tr = mann_iterate(toy, Point{3.0}, 0.5, 30);
    EXPECT_EQ(check_fejer_monotone(toy, tr, Point{0.0}, 1e-9).worst_violation, 0.0);
    EXPECT_TRUE(check_fejer_monotone(toy, mann_iterate(toy, Point{0.0}, 0.5, 5), Point{0.0}, 1e-9).passed);

    IterationTrace rev = tr;
    std::reverse(rev.points.begin(), rev.points.end());
    const auto bad = check_fejer_monotone(toy, rev, Point{0.0}, 1e-9);
    EXPECT_FALSE(bad.passed);
    EXPECT_GT(bad.worst_violation, 0.0);
    EXPECT_THROW(check_fejer_monotone(toy, tr, Point{2.0}, 1e-9), PreconditionError);
}

TEST(Fejer, BuiltinDAndEExamples) {
    const Space iv = Space::interval(0, 3);
    for (const auto& m : {toy, MapUnderTest::affine(iv, 0.5, 0.5), MapUnderTest::constant(iv, Point{2.0})}) {
        const auto pts = checker_sample(m, grid_points(iv, 301));
        ASSERT_TRUE(check_condition_D(m, 0.5, pts, 1e-9).passed);
        ASSERT_TRUE(check_condition_E(m, 3.0, pts, 1e-9).passed);
        const auto tr = mann_iterate(m, Point{3.0}, 0.5, 80);
        const auto fp = detect_fixed_point(tr, 1e-9);
        ASSERT_TRUE(fp.has_value()) << m.describe();
        const Point limit = tr.points.back();
        EXPECT_TRUE(check_fejer_monotone(m, tr, limit, 1e-9).passed) << m.describe();
        EXPECT_LT(*std::min_element(tr.residuals.begin(), tr.residuals.end()), 1e-9);
    }
}

TEST(Ergodic, Averages) {
    const Space plane = Space::box(2, -2, 2, Norm::L2);
    const Point f{1.0, 0.0};
    const auto id = MapUnderTest::matrix(plane, {{1, 0}, {0, 1}});
    for (std::size_t n : {1u, 2u, 7u}) EXPECT_EQ(ergodic_average(id, f, n), f);
    const double c = std::cos(std::numbers::pi), s = std::sin(std::numbers::pi);
    const auto rot = MapUnderTest::matrix(plane, {{c, -s}, {s, c}});
    const Point a = ergodic_average(rot, f, 2);
    EXPECT_NEAR(a[0], 0.0, 1e-15);
    EXPECT_NEAR(a[1], 0.0, 1e-15);
    const Point z = ergodic_average(MapUnderTest::matrix(plane, {{0, 0}, {0, 0}}), Point{0.9, -0.3}, 3);
    EXPECT_NEAR(z[0], 0.3, 1e-15);
    EXPECT_NEAR(z[1], -0.1, 1e-15);
    EXPECT_THROW(ergodic_average(toy, Point{1.0}, 2), KindError);
    EXPECT_THROW(ergodic_average(id, f, 0), ParameterError);

    // Power-bounded rotation: A_n f is Cauchy, |A_n f| <= 2 / (n |1 - e^{i theta}|).
    const double th = 1.0;
    const auto r1 = MapUnderTest::matrix(plane, {{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}});
    const double bound = 2.0 / std::abs(2.0 * std::sin(th / 2));
    for (std::size_t n : {10u, 100u, 1000u}) {
        const Point an = ergodic_average(r1, f, n);
        EXPECT_LE(std::hypot(an[0], an[1]), bound / static_cast<double>(n) + 1e-12);
    }
}
