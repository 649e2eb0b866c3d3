#include <algorithm>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "geometa/tbound.hpp"

using namespace geometa;

TEST(GreedyNet, Examples) {
    const Space unit = Space::interval(0.0, 1.0);
    const auto grid = grid_points(unit, 1001);
    const NetResult half = greedy_net(unit, grid, 0.5);
    EXPECT_TRUE(half.covered);
    EXPECT_LE(half.centers.size(), 2u);
    EXPECT_EQ(half.center_indices.front(), 0u);
    EXPECT_EQ(interval_cover(unit, grid, 0.5).centers.size(), 1u);

    const Space big = Space::interval(0.0, 3.0);
    EXPECT_EQ(greedy_net(big, grid_points(big, 301), 3.0).centers.size(), 1u);
    const std::vector<Point> two{Point{0.0}, Point{3.0}};
    const NetResult t = greedy_net(big, two, 1.0);
    EXPECT_EQ(t.centers.size(), 2u);
    EXPECT_EQ(t.center_indices, (std::vector<std::size_t>{0, 1}));
    EXPECT_THROW(greedy_net(big, two, 0.0), ParameterError);
    EXPECT_THROW(greedy_net(big, std::vector<Point>{}, 1.0), PreconditionError);
}

TEST(GreedyNet, CoverageSoundAndDeterministic) {
    const std::vector<Space> spaces = {Space::box(2, 0, 1, Norm::L2), Space::box(3, -1, 1, Norm::Linf),
                                       Space::ball(2, 1, Norm::L1), Space::sphere()};
    for (const Space& s : spaces) {
        const auto sample = sample_points(s, 400, 21);
        for (double r : {0.2, 0.5, 1.0}) {
            const NetResult a = greedy_net(s, sample, r);
            const NetResult b = greedy_net(s, sample, r);
            EXPECT_EQ(a.center_indices, b.center_indices);
            EXPECT_EQ(a.covered, covering_radius(s, sample, a.centers) <= r);
            EXPECT_TRUE(a.covered);
            for (const auto& x : sample) {
                double best = 1e300;
                for (const auto& c : a.centers) best = std::min(best, s.distance(x, c));
                EXPECT_LE(best, r);
            }
        }
    }
}

TEST(GreedyNet, LowestIndexTieBreak) {
    const Space s = Space::interval(0.0, 4.0);
    // From 2, both 0 and 4 are at distance 2; the lower index (1) wins.
    const std::vector<Point> pts{Point{2.0}, Point{0.0}, Point{4.0}};
    const NetResult n = greedy_net(s, pts, 1.0);
    EXPECT_EQ(n.center_indices, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ModulusBeta, Examples) {
    const Space unit = Space::interval(0.0, 1.0);
    EXPECT_EQ(modulus_beta(unit, grid_points(unit, 1001), 1), 0u);
    const Space big = Space::interval(0.0, 3.0);
    EXPECT_EQ(modulus_beta(big, grid_points(big, 3001), 0), 1u);
    EXPECT_EQ(modulus_beta(Space::box(2, 0, 1, Norm::Linf), grid_points(Space::box(2, 0, 1, Norm::Linf), 11), 0), 0u);
}

TEST(ModulusBeta, BruteForceOnSmallGrid) {
    // [0,3] with step 0.25: the least number of centers from the grid covering it within 1/(k+1).
    const Space s = Space::interval(0.0, 3.0);
    const auto g = grid_points(s, 13);
    for (std::size_t k = 0; k < 4; ++k) {
        const double r = 1.0 / static_cast<double>(k + 1);
        std::size_t best = g.size();
        for (unsigned mask = 1; mask < (1u << g.size()); ++mask) {
            const auto cnt = static_cast<std::size_t>(__builtin_popcount(mask));
            if (cnt >= best) continue;
            std::vector<Point> cs;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (mask & (1u << i)) cs.push_back(g[i]);
            if (covering_radius(s, g, cs) <= r) best = cnt;
        }
        EXPECT_LE(modulus_beta(s, g, k) + 1, best) << k;
    }
}

TEST(ModulusBeta, MonotoneInK) {
    const Space iv = Space::interval(0.0, 3.0);
    const Space disk = Space::ball(2, 1.5, Norm::L2);
    const auto gi = grid_points(iv, 601);
    const auto gd = sample_points(disk, 500, 8);
    std::size_t pi = 0, pd = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        const std::size_t bi = modulus_beta(iv, gi, k), bd = modulus_beta(disk, gd, k);
        EXPECT_GE(bi, pi);
        EXPECT_GE(bd, pd);
        pi = bi, pd = bd;
    }
}

TEST(AlphaFromBeta, Conversion) {
    const auto id = [](std::size_t k) { return k; };
    EXPECT_EQ(alpha_from_beta(id, 0).k, 2u);
    EXPECT_EQ(alpha_from_beta(id, 1).k, 4u);
    EXPECT_EQ(alpha_from_beta(id, 1).alpha, 4u);
    for (std::size_t K = 0; K < 20; ++K) {
        const std::size_t k = alpha_from_beta(id, K).k;
        EXPECT_LT(2.0 / static_cast<double>(k + 1), 1.0 / static_cast<double>(K + 1));
        if (k > 0) { EXPECT_GE(2.0 / static_cast<double>(k), 1.0 / static_cast<double>(K + 1)); }
        EXPECT_EQ(alpha_from_beta([](std::size_t) { return std::size_t{0}; }, K).alpha, 0u);
    }
}

TEST(AlphaFromBeta, CentersCoverAtCoarserRadius) {
    const std::vector<std::pair<Space, std::vector<Point>>> cases = {
        {Space::interval(0.0, 3.0), grid_points(Space::interval(0.0, 3.0), 301)},
        {Space::box(2, 0, 2, Norm::L2), sample_points(Space::box(2, 0, 2, Norm::L2), 400, 2)},
        {Space::sphere(), sample_points(Space::sphere(), 300, 4)},
    };
    for (const auto& [s, sample] : cases)
        for (std::size_t K = 0; K < 3; ++K) {
            const auto conv = alpha_from_beta([&](std::size_t k) { return modulus_beta(s, sample, k); }, K);
            const NetResult net = greedy_net(s, sample, 1.0 / static_cast<double>(conv.k + 1));
            EXPECT_LE(covering_radius(s, sample, net.centers), 1.0 / static_cast<double>(K + 1));
        }
}
