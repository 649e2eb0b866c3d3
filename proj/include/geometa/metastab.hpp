#pragma once

#include <algorithm>
#include <bit>
#include <concepts>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/fspec.hpp"
#include "geometa/point.hpp"
#include "geometa/space.hpp"

namespace geometa {

struct MetastabilityReport {
    double epsilon = 0.0;
    std::optional<std::size_t> witness_n;  ///< least n with oscillation on [n, max(n,F(n))] < epsilon
    double oscillation_at_witness = 0.0;
    std::size_t scan_cap = 0;
    bool exhausted = false;  ///< no witness up to scan_cap
};

/// Range oscillation max_{i,j in [a,b]} |x_i - x_j| of a real sequence, O(1)
/// per query after an O(L log L) sparse-table build. Indices are 1-based.
class RealOscillation {
public:
    explicit RealOscillation(std::span<const double> seq) : n_(seq.size()) {
        if (n_ == 0) return;
        const std::size_t levels = static_cast<std::size_t>(std::bit_width(n_));
        mins_.assign(levels, {});
        maxs_.assign(levels, {});
        mins_[0].assign(seq.begin(), seq.end());
        maxs_[0].assign(seq.begin(), seq.end());
        for (std::size_t k = 1; k < levels; ++k) {
            const std::size_t span = std::size_t{1} << k, half = span / 2;
            mins_[k].resize(n_ - span + 1);
            maxs_[k].resize(n_ - span + 1);
            for (std::size_t i = 0; i + span <= n_; ++i) {
                mins_[k][i] = std::min(mins_[k - 1][i], mins_[k - 1][i + half]);
                maxs_[k][i] = std::max(maxs_[k - 1][i], maxs_[k - 1][i + half]);
            }
        }
    }

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t a, std::size_t b) const {
        check_range(a, b, n_);
        const std::size_t lo = a - 1, len = b - a + 1;
        const std::size_t k = static_cast<std::size_t>(std::bit_width(len)) - 1;
        const std::size_t hi = b - (std::size_t{1} << k);
        return std::max(maxs_[k][lo], maxs_[k][hi]) - std::min(mins_[k][lo], mins_[k][hi]);
    }

    static void check_range(std::size_t a, std::size_t b, std::size_t n) {
        if (a < 1 || a > b || b > n)
            throw DomainError("oscillation index range [" + std::to_string(a) + "," + std::to_string(b) +
                              "] outside 1.." + std::to_string(n));
    }

private:
    std::size_t n_;
    std::vector<std::vector<double>> mins_, maxs_;
};

/// Range oscillation of a point sequence under a space's metric. Interval
/// spaces reduce to the real case; otherwise all pairs of the window are
/// compared.
class MetricOscillation {
public:
    MetricOscillation(const Space& space, std::span<const Point> pts)
        : space_(space), pts_(pts.begin(), pts.end()) {
        if (space.kind() == SpaceKind::Interval) {
            std::vector<double> coords;
            coords.reserve(pts_.size());
            for (const Point& p : pts_) coords.push_back(p[0]);
            line_.emplace(coords);
        }
    }

    std::size_t size() const noexcept { return pts_.size(); }

    double operator()(std::size_t a, std::size_t b) const {
        RealOscillation::check_range(a, b, pts_.size());
        if (line_) return space_.scale() * (*line_)(a, b);
        return space_.visit_metric([&](auto d) {
            double worst = 0.0;
            for (std::size_t i = a - 1; i < b; ++i)
                for (std::size_t j = i + 1; j < b; ++j) worst = std::max(worst, d(pts_[i], pts_[j]));
            return worst;
        });
    }

private:
    Space space_;
    std::vector<Point> pts_;
    std::optional<RealOscillation> line_;
};

inline double oscillation(std::span<const double> seq, std::size_t a, std::size_t b) {
    RealOscillation::check_range(a, b, seq.size());
    const auto first = seq.begin() + static_cast<std::ptrdiff_t>(a - 1);
    const auto last = seq.begin() + static_cast<std::ptrdiff_t>(b);
    const auto [lo, hi] = std::minmax_element(first, last);
    return *hi - *lo;
}

inline double oscillation(const Space& space, std::span<const Point> seq, std::size_t a, std::size_t b) {
    return MetricOscillation(space, seq.subspan(0, std::min(seq.size(), b)))(a, b);
}

/// Anything answering oscillation queries osc(a, b) on 1-based ranges.
template <class O>
concept RangeOscillation = requires(const O& o, std::size_t i) {
    { o(i, i) } -> std::convertible_to<double>;
    { o.size() } -> std::convertible_to<std::size_t>;
};

namespace detail {

inline void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
}

}  // namespace detail

/// Least n <= cap with oscillation over [n, max(n, F(n))] strictly below epsilon.
/// Throws InsufficientDataError when the scan needs a window past the data.
template <RangeOscillation Oscillation>
MetastabilityReport least_witness(const Oscillation& osc, const FSpec& F, double epsilon, std::size_t cap) {
    detail::require_epsilon(epsilon);
    if (cap < 1) throw ParameterError("scan cap must be at least 1");
    MetastabilityReport rep;
    rep.epsilon = epsilon;
    rep.scan_cap = cap;
    for (std::size_t n = 1; n <= cap; ++n) {
        const std::uint64_t end = F.window_end(n);
        if (end > osc.size()) throw InsufficientDataError(osc.size(), static_cast<std::size_t>(end));
        const double o = osc(n, static_cast<std::size_t>(end));
        if (o < epsilon) {
            rep.witness_n = n;
            rep.oscillation_at_witness = o;
            return rep;
        }
    }
    rep.exhausted = true;
    return rep;
}

inline MetastabilityReport least_witness(std::span<const double> seq, const FSpec& F, double epsilon,
                                         std::size_t cap) {
    return least_witness(RealOscillation(seq), F, epsilon, cap);
}

/// Adversarial F from the Cauchy/metastability equivalence: for each n <= cap
/// the least m >= n with oscillation on [n, m] >= epsilon, so F(n) = m is
/// max(i_n, j_n) for a pair realising it. Empty when some n has no such pair
/// in the data.
template <RangeOscillation Oscillation>
std::optional<FSpec> counterexample_F(const Oscillation& osc, double epsilon, std::size_t cap) {
    detail::require_epsilon(epsilon);
    const std::size_t L = osc.size();
    std::map<std::uint64_t, std::uint64_t> table;
    for (std::size_t n = 1; n <= cap; ++n) {
        if (n > L || osc(n, L) < epsilon) return std::nullopt;
        std::size_t lo = n, hi = L;  // osc(n, m) is nondecreasing in m
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (osc(n, mid) >= epsilon) hi = mid;
            else lo = mid + 1;
        }
        table[n] = lo;
    }
    if (table.empty()) return std::nullopt;
    return FSpec::table(std::move(table));
}

inline std::optional<FSpec> counterexample_F(std::span<const double> seq, double epsilon, std::size_t cap) {
    return counterexample_F(RealOscillation(seq), epsilon, cap);
}

struct CauchyEstimate {
    double epsilon = 0.0;
    std::size_t K = 1;
    bool in_sample = true;  ///< only the observed prefix was examined
};

/// For each epsilon the least K with oscillation over [K, N] < epsilon.
template <RangeOscillation Oscillation>
std::vector<CauchyEstimate> cauchy_modulus_estimate(const Oscillation& osc, std::span<const double> epsilons) {
    const std::size_t L = osc.size();
    if (L == 0) throw PreconditionError("Cauchy modulus estimate needs a nonempty sequence");
    std::vector<CauchyEstimate> out;
    for (double eps : epsilons) {
        detail::require_epsilon(eps);
        std::size_t lo = 1, hi = L;  // osc(K, L) is nonincreasing in K
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (osc(mid, L) < eps) hi = mid;
            else lo = mid + 1;
        }
        out.push_back({eps, lo, true});
    }
    return out;
}

inline std::vector<CauchyEstimate> cauchy_modulus_estimate(std::span<const double> seq,
                                                           std::span<const double> epsilons) {
    return cauchy_modulus_estimate(RealOscillation(seq), epsilons);
}

/// max over n <= cap of max(n, F(n)), plus one.
inline std::size_t default_trace_length(const FSpec& F, std::size_t cap) {
    std::uint64_t m = 0;
    for (std::size_t n = 1; n <= cap; ++n) m = std::max(m, F.window_end(n));
    return static_cast<std::size_t>(m + 1);
}

}  // namespace geometa
