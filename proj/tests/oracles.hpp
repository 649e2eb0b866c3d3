#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library beyond plain value types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

/// Hand iteration of the toy map T(3)=1, T(x)=0 otherwise, with the affine
/// step x + lambda (Tx - x).
inline std::vector<double> toy_trace(double x1, double lambda, std::size_t n) {
    std::vector<double> xs{x1};
    while (xs.size() < n) {
        const double x = xs.back();
        const double tx = x == 3.0 ? 1.0 : 0.0;
        xs.push_back(x + lambda * (tx - x));
    }
    return xs;
}

inline std::vector<double> toy_residuals(const std::vector<double>& xs) {
    std::vector<double> r;
    for (double x : xs) r.push_back(std::abs(x - (x == 3.0 ? 1.0 : 0.0)));
    return r;
}

/// max - min over the 1-based window [a, b], by direct scan.
inline double osc(const std::vector<double>& s, std::size_t a, std::size_t b) {
    double lo = s[a - 1], hi = s[a - 1];
    for (std::size_t i = a; i <= b; ++i) lo = std::min(lo, s[i - 1]), hi = std::max(hi, s[i - 1]);
    return hi - lo;
}

/// Pairwise version: max over i, j in [a, b] of |s_i - s_j|.
inline double osc_pairs(const std::vector<double>& s, std::size_t a, std::size_t b) {
    double best = 0.0;
    for (std::size_t i = a; i <= b; ++i)
        for (std::size_t j = a; j <= b; ++j) best = std::max(best, std::abs(s[i - 1] - s[j - 1]));
    return best;
}

template <class F>
std::function<std::size_t(std::size_t)> as_fn(const F& f) {
    return [f](std::size_t n) { return static_cast<std::size_t>(f(n)); };
}

inline std::optional<std::size_t> scan_witness(const std::vector<double>& s, const std::function<std::size_t(std::size_t)>& F,
                                               double eps, std::size_t cap) {
    for (std::size_t n = 1; n <= cap; ++n) {
        const std::size_t end = std::max(n, F(n));
        if (osc_pairs(s, n, end) < eps) return n;
    }
    return std::nullopt;
}

}  // namespace oracle
