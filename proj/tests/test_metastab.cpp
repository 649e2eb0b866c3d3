#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "geometa/iterate.hpp"
#include "geometa/metastab.hpp"
#include "geometa/rng.hpp"
#include "oracles.hpp"

using namespace geometa;

namespace {

std::vector<double> toy_residuals(std::size_t n) {
    return oracle::toy_residuals(oracle::toy_trace(3.0, 0.5, n));
}

std::vector<double> alternating(std::size_t n) {
    std::vector<double> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<double>(i % 2));
    return s;
}

// Slowly converging noisy sequences.
std::vector<double> noisy(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> s;
    double x = rng.uniform(-1, 1);
    for (std::size_t i = 1; i <= n; ++i) {
        x += rng.uniform(-1, 1) / std::sqrt(static_cast<double>(i)) * (rng.uniform() < 0.2 ? 1.0 : 0.1);
        s.push_back(x);
    }
    return s;
}

}  // namespace

TEST(Oscillation, ToyValues) {
    const auto r = toy_residuals(30);
    EXPECT_EQ(oscillation(r, 6, 12), 0.123046875);
    EXPECT_EQ(oscillation(r, 7, 14), 0.06201171875);
    EXPECT_EQ(oscillation(r, 6, 12), oracle::osc(r, 6, 12));
    const RealOscillation osc(r);
    EXPECT_EQ(osc(6, 12), 0.123046875);
    EXPECT_EQ(osc(7, 14), 0.06201171875);
    EXPECT_EQ(osc(9, 9), 0.0);
}

TEST(Oscillation, ConstantAndRange) {
    const std::vector<double> c(20, 0.7);
    EXPECT_EQ(oscillation(c, 1, 20), 0.0);
    EXPECT_THROW(oscillation(c, 0, 3), DomainError);
    EXPECT_THROW(oscillation(c, 4, 3), DomainError);
    EXPECT_THROW(oscillation(c, 1, 21), DomainError);
    EXPECT_THROW(RealOscillation{c}(1, 21), DomainError);
}

TEST(Oscillation, SparseTableMatchesScan) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = noisy(seed, 300);
        const RealOscillation osc(s);
        Rng rng(seed * 77);
        for (int q = 0; q < 500; ++q) {
            std::size_t a = 1 + static_cast<std::size_t>(rng.uniform() * 300);
            std::size_t b = 1 + static_cast<std::size_t>(rng.uniform() * 300);
            if (a > b) std::swap(a, b);
            EXPECT_EQ(osc(a, b), oracle::osc(s, a, b));
        }
    }
}

TEST(Oscillation, MetricSequences) {
    const Space iv = Space::interval(0.0, 3.0).scaled(2.0);
    const std::vector<Point> line{Point{0.0}, Point{1.0}, Point{0.5}, Point{2.0}};
    EXPECT_EQ(oscillation(iv, line, 1, 3), 2.0);
    EXPECT_EQ(oscillation(iv, line, 2, 4), 3.0);

    const Space plane = Space::box(2, -1, 1, Norm::L2);
    const std::vector<Point> pts{Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{-1, -1}};
    EXPECT_NEAR(MetricOscillation(plane, pts)(1, 3), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(oscillation(plane, pts, 2, 4), std::sqrt(5.0), 1e-15);
    EXPECT_EQ(MetricOscillation(plane, pts)(2, 2), 0.0);
}

TEST(LeastWitness, ToyResiduals) {
    // r_1 = r_2 = 2, so the window [1,2] is already flat.
    const auto r = toy_residuals(30);
    const FSpec F = FSpec::parse("2*n");
    const auto rep = least_witness(r, F, 0.1, 15);
    ASSERT_TRUE(rep.witness_n.has_value());
    EXPECT_EQ(*rep.witness_n, 1u);
    EXPECT_EQ(rep.oscillation_at_witness, 0.0);
    EXPECT_EQ(*oracle::scan_witness(r, oracle::as_fn(F), 0.1, 15), 1u);

    // From n = 2 on the residuals equal the iterates, which first settle at 7.
    const std::vector<double> tail(r.begin() + 1, r.end());
    EXPECT_EQ(*oracle::scan_witness(tail, oracle::as_fn(FSpec::parse("2*n+1")), 0.1, 15) + 1, 7u);
}

TEST(LeastWitness, ToyIterates) {
    const auto xs = oracle::toy_trace(3.0, 0.5, 30);
    std::vector<Point> pts;
    for (double x : xs) pts.push_back(Point{x});
    const FSpec F = FSpec::parse("2*n");
    const auto rep = least_witness(MetricOscillation(Space::interval(0, 3), pts), F, 0.1, 15);
    ASSERT_TRUE(rep.witness_n.has_value());
    EXPECT_EQ(*rep.witness_n, 7u);
    EXPECT_EQ(rep.oscillation_at_witness, 0.06201171875);
    EXPECT_FALSE(rep.exhausted);
    EXPECT_EQ(*oracle::scan_witness(xs, oracle::as_fn(F), 0.1, 15), 7u);
}

TEST(LeastWitness, TrivialWitnesses) {
    const auto r = toy_residuals(30);
    EXPECT_EQ(*least_witness(r, FSpec::parse("2*n"), 3.5, 15).witness_n, 1u);
    const std::vector<double> c(50, 1.0);
    for (const char* f : {"n", "2*n", "n^2", "n+7"})
        EXPECT_EQ(*least_witness(c, FSpec::parse(f), 1e-12, 5).witness_n, 1u);
}

TEST(LeastWitness, StrictComparison) {
    const std::vector<double> s{0.0, 0.5, 0.5, 0.5};
    // osc[1,2] = 0.5 is not < 0.5.
    const auto rep = least_witness(s, FSpec::parse("n+1"), 0.5, 3);
    EXPECT_EQ(*rep.witness_n, 2u);
}

TEST(LeastWitness, InsufficientData) {
    const auto r = alternating(30);
    try {
        least_witness(r, FSpec::parse("2*n"), 0.5, 100);
        FAIL();
    } catch (const InsufficientDataError& e) {
        EXPECT_EQ(e.available(), 30u);
        EXPECT_EQ(e.required(), 32u);
    }
    EXPECT_THROW(least_witness(r, FSpec::parse("2*n"), 0.0, 3), ParameterError);
    EXPECT_THROW(least_witness(r, FSpec::parse("2*n"), 0.1, 0), ParameterError);
}

TEST(LeastWitness, ValidityMinimalityMonotonicityDominance) {
    const std::vector<FSpec> Fs = {FSpec::parse("n"), FSpec::parse("n+1"), FSpec::parse("2*n"),
                                   FSpec::parse("2*n+3"), FSpec::parse("n^2"), FSpec::parse("3*n+10")};
    const std::vector<double> eps{0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    const std::size_t cap = 40;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto s = noisy(seed, 1700);
        const RealOscillation osc(s);
        for (std::size_t fi = 0; fi < Fs.size(); ++fi) {
            const FSpec& F = Fs[fi];
            std::optional<std::size_t> prev;
            for (double e : eps) {
                const auto rep = least_witness(osc, F, e, cap);
                EXPECT_EQ(rep.witness_n.has_value(), !rep.exhausted);
                EXPECT_EQ(rep.witness_n, oracle::scan_witness(s, oracle::as_fn(F), e, cap));
                if (rep.witness_n) {
                    const std::size_t n = *rep.witness_n;
                    EXPECT_LT(oracle::osc(s, n, F.window_end(n)), e);
                    EXPECT_LT(rep.oscillation_at_witness, e);
                    for (std::size_t m = 1; m < n; ++m) EXPECT_GE(oracle::osc(s, m, F.window_end(m)), e);
                }
                // Larger epsilon: witness no larger (exhausted counts as infinity).
                if (prev && rep.witness_n) { EXPECT_LE(*rep.witness_n, *prev); }
                if (prev) { EXPECT_TRUE(rep.witness_n.has_value()); }
                prev = rep.witness_n;
            }
        }
        // 2n+3 >= 2n >= n and n^2 >= n pointwise.
        for (double e : eps) {
            auto w = [&](const char* f) {
                return least_witness(osc, FSpec::parse(f), e, cap).witness_n.value_or(cap + 1);
            };
            EXPECT_LE(w("n"), w("2*n"));
            EXPECT_LE(w("2*n"), w("2*n+3"));
            EXPECT_LE(w("n"), w("n^2"));
            EXPECT_LE(w("2*n+3"), w("3*n+10"));
        }
    }
}

TEST(Counterexample, Alternating) {
    const auto s = alternating(101);
    const auto F = counterexample_F(s, 0.5, 100);
    ASSERT_TRUE(F.has_value());
    EXPECT_TRUE(F->is_table());
    for (std::size_t n = 1; n <= 100; ++n) EXPECT_EQ((*F)(n), n + 1);
    for (std::size_t cap : {1u, 10u, 100u}) {
        const auto rep = least_witness(s, *F, 0.5, cap);
        EXPECT_TRUE(rep.exhausted);
        EXPECT_FALSE(rep.witness_n.has_value());
    }
}

TEST(Counterexample, ConstantAndToy) {
    EXPECT_FALSE(counterexample_F(std::vector<double>(30, 2.0), 0.1, 5).has_value());
    const auto r = toy_residuals(30);
    // r_7 - r_30 >= 0.05 but r_8 = 0.03125: defined through n = 7 only.
    const auto F = counterexample_F(r, 0.05, 7);
    ASSERT_TRUE(F.has_value());
    EXPECT_FALSE(counterexample_F(r, 0.05, 8).has_value());
    for (std::size_t n = 1; n <= 7; ++n) {
        std::size_t m = n;
        while (oracle::osc_pairs(r, n, m) < 0.05) ++m;
        EXPECT_EQ((*F)(n), m);
    }
    EXPECT_TRUE(least_witness(r, *F, 0.05, 7).exhausted);
}

TEST(Counterexample, SoundOnRandomSequences) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = noisy(seed, 400);
        for (double e : {0.05, 0.1, 0.3}) {
            const auto F = counterexample_F(s, e, 30);
            if (!F) continue;
            const auto rep = least_witness(s, *F, e, 30);
            EXPECT_TRUE(rep.exhausted) << seed << " " << e;
            for (std::size_t n = 1; n <= 30; ++n) EXPECT_GE(oracle::osc(s, n, (*F)(n)), e);
        }
    }
}

TEST(Cauchy, Estimates) {
    const auto r = toy_residuals(30);
    const std::vector<double> eps{0.1, 5.0};
    const auto est = cauchy_modulus_estimate(r, eps);
    ASSERT_EQ(est.size(), 2u);
    EXPECT_EQ(est[0].K, 7u);
    EXPECT_TRUE(est[0].in_sample);
    EXPECT_EQ(est[1].K, 1u);
    const std::vector<double> c(10, 0.3);
    for (const auto& e : cauchy_modulus_estimate(c, eps)) EXPECT_EQ(e.K, 1u);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = noisy(seed, 200);
        for (const auto& e : cauchy_modulus_estimate(s, std::vector<double>{0.05, 0.2})) {
            std::size_t K = 1;
            while (oracle::osc(s, K, 200) >= e.epsilon) ++K;
            EXPECT_EQ(e.K, K);
        }
    }
}

TEST(Metastab, DefaultTraceLength) {
    EXPECT_EQ(default_trace_length(FSpec::parse("2*n"), 1000), 2001u);
    EXPECT_EQ(default_trace_length(FSpec::parse("1"), 10), 11u);
}
