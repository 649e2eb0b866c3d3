#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometa/conditions.hpp"
#include "geometa/fspec.hpp"
#include "geometa/iterate.hpp"
#include "geometa/maps.hpp"
#include "geometa/metastab.hpp"
#include "geometa/parallel.hpp"
#include "geometa/rng.hpp"
#include "geometa/tbound.hpp"

namespace geometa {

/// Default number of starting indices scanned by least_witness.
inline constexpr std::size_t kDefaultScanCap = 1000;

/// Tolerance of the per-instance (D_lambda) and (E_mu) verification.
inline constexpr double kFamilyCheckTolerance = 1e-9;

struct Instance {
    std::string id;
    MapUnderTest map;
    Point x1;
    double lambda = 0.5;
    std::vector<std::pair<std::string, double>> parameters;
};

using InstanceGenerator = std::function<Instance(std::size_t index, std::uint64_t instance_seed)>;

struct FamilySpec {
    std::string name;
    InstanceGenerator generate;
    std::size_t count = 0;
    std::uint64_t seed = 0;

    Instance instance(std::size_t index) const { return generate(index, derive_seed(seed, index)); }
};

namespace families {

/// T x = c x on [0,1] with c uniform in [0.1, 0.9], x1 uniform in [0,1].
inline FamilySpec affine_contractions(std::size_t count, std::uint64_t seed, double lambda = 0.5) {
    return {"affine", [lambda](std::size_t i, std::uint64_t s) {
                Rng rng(s);
                const double c = rng.uniform(0.1, 0.9);
                const double x1 = rng.uniform();
                const Space sp = Space::interval(0.0, 1.0);
                return Instance{"affine-" + std::to_string(i), MapUnderTest::affine(sp, c, 0.0),
                                Point{x1}, lambda, {{"c", c}, {"x1", x1}}};
            },
            count, seed};
}

/// Rotation by an angle in [0, pi] composed with a shrink in [0.3, 0.95] on the unit disk.
inline FamilySpec rotation_shrinks(std::size_t count, std::uint64_t seed, double lambda = 0.5) {
    return {"rotation", [lambda](std::size_t i, std::uint64_t s) {
                Rng rng(s);
                const double angle = rng.uniform(0.0, std::numbers::pi);
                const double factor = rng.uniform(0.3, 0.95);
                const double r = std::sqrt(rng.uniform());
                const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const Space sp = Space::ball(2, 1.0, Norm::L2);
                return Instance{"rotation-" + std::to_string(i), MapUnderTest::rotation_shrink(sp, angle, factor),
                                Point{r * std::cos(phi), r * std::sin(phi)}, lambda,
                                {{"angle", angle}, {"factor", factor}, {"r", r}}};
            },
            count, seed};
}

/// T = 0 on [0,3] except T b = v, started at b, with b in [1,3] and
/// v in [0, lambda b / (1 + lambda)].
inline FamilySpec jumps(std::size_t count, std::uint64_t seed, double lambda = 0.5) {
    return {"jump", [lambda](std::size_t i, std::uint64_t s) {
                Rng rng(s);
                const double b = rng.uniform(1.0, 3.0);
                const double v = rng.uniform(0.0, lambda * b / (1.0 + lambda));
                const Space sp = Space::interval(0.0, 3.0);
                return Instance{"jump-" + std::to_string(i), MapUnderTest::piecewise_constant(sp, {}, {0.0}, {{b, v}}),
                                Point{b}, lambda, {{"b", b}, {"v", v}}};
            },
            count, seed};
}

/// T x = v on [0,1], started at v.
inline FamilySpec constants(std::size_t count, std::uint64_t seed, double lambda = 0.5) {
    return {"constant", [lambda](std::size_t i, std::uint64_t s) {
                Rng rng(s);
                const double v = rng.uniform();
                const Space sp = Space::interval(0.0, 1.0);
                return Instance{"constant-" + std::to_string(i), MapUnderTest::constant(sp, Point{v}), Point{v},
                                lambda, {{"v", v}}};
            },
            count, seed};
}

/// The toy map on [0,3] started at 3.
inline FamilySpec suzuki(std::size_t count = 1, double lambda = 0.5) {
    return {"suzuki", [lambda](std::size_t i, std::uint64_t) {
                return Instance{"suzuki-" + std::to_string(i), MapUnderTest::suzuki_toy(), Point{3.0}, lambda, {}};
            },
            count, 0};
}

/// `count` copies of one instance.
inline FamilySpec identical(Instance inst, std::size_t count) {
    return {"identical", [inst = std::move(inst)](std::size_t i, std::uint64_t) {
                Instance copy = inst;
                copy.id += "#" + std::to_string(i);
                return copy;
            },
            count, 0};
}

/// Cycles through the affine, rotation, jump and constant families.
inline FamilySpec mixed(std::size_t count, std::uint64_t seed, double lambda = 0.5) {
    const std::vector<FamilySpec> parts = {affine_contractions(0, seed, lambda), rotation_shrinks(0, seed, lambda),
                                           jumps(0, seed, lambda), constants(0, seed, lambda)};
    return {"mixed", [parts](std::size_t i, std::uint64_t s) { return parts[i % parts.size()].generate(i, s); },
            count, seed};
}

}  // namespace families

struct InstanceResult {
    std::size_t index = 0;
    std::string id;
    std::vector<std::pair<std::string, double>> parameters;
    MetastabilityReport witness;       ///< on d(x_n, T x_n), or on {x_n} in fixed-point mode
    MetastabilityReport step_witness;  ///< on d(x_n, x_{n+1})
    double condition_violation = 0.0;  ///< (D_lambda), or (E_mu) in fixed-point mode
    bool condition_passed = false;
    std::optional<std::size_t> beta;  ///< fixed-point mode only
    std::string error;

    bool failed() const noexcept { return !error.empty() || !condition_passed || witness.exhausted; }
};

struct FamilyResult {
    std::string label = "empirical";
    std::string mode;
    std::vector<InstanceResult> instances;
    std::optional<std::size_t> uniform_bound;
    std::optional<std::size_t> uniform_bound_step;
    std::optional<std::size_t> shared_beta;
    std::vector<std::size_t> failures;  ///< indices of failed instances
};

struct FamilyOptions {
    std::size_t cap = kDefaultScanCap;
    std::optional<std::size_t> trace_length;  ///< default: max over n <= cap of max(n, F(n)), plus one
    unsigned workers = default_workers();
    double mu = 3.0;              ///< fixed-point mode
    std::size_t beta_k = 1;       ///< fixed-point mode: beta evaluated at this k
    std::size_t sample_size = 256;  ///< fixed-point mode: random points added to the (E_mu) and beta samples
    std::size_t trace_sample = 256; ///< fixed-point mode: leading trace points added to the (E_mu) sample
};

namespace detail {

inline std::optional<std::size_t> max_witness(const std::vector<InstanceResult>& rs,
                                              MetastabilityReport InstanceResult::*field) {
    std::optional<std::size_t> best;
    for (const auto& r : rs)
        if (r.error.empty() && (r.*field).witness_n) best = std::max(best.value_or(0), *(r.*field).witness_n);
    return best;
}

template <class PerInstance>
FamilyResult run_family(const FamilySpec& family, unsigned workers, std::string mode, PerInstance&& per_instance) {
    FamilyResult out;
    out.mode = std::move(mode);
    out.instances.resize(family.count);
    parallel_reduce(
        family.count, workers, 0,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                InstanceResult& r = out.instances[i];
                r.index = i;
                try {
                    const Instance inst = family.instance(i);
                    r.id = inst.id;
                    r.parameters = inst.parameters;
                    per_instance(inst, r);
                } catch (const std::exception& ex) {
                    r.error = ex.what();
                }
            }
            return 0;
        },
        [](int a, int) { return a; });
    for (const auto& r : out.instances)
        if (r.failed()) out.failures.push_back(r.index);
    out.uniform_bound = max_witness(out.instances, &InstanceResult::witness);
    out.uniform_bound_step = max_witness(out.instances, &InstanceResult::step_witness);
    return out;
}

}  // namespace detail

/// Per instance: lambda-Mann trace, (D_lambda) on the trace points, and the least
/// metastability witnesses of the residual and step sequences. The uniform
/// bound is the maximum witness over the instances that produced one.
inline FamilyResult uniform_bound(const FamilySpec& family, const FSpec& F, double epsilon,
                                  const FamilyOptions& opt = {}) {
    detail::require_epsilon(epsilon);
    const std::size_t length = opt.trace_length.value_or(default_trace_length(F, opt.cap));
    return detail::run_family(family, opt.workers, "residual", [&](const Instance& inst, InstanceResult& r) {
        const IterationTrace tr = mann_iterate(inst.map, inst.x1, inst.lambda, length, std::max(length, kDefaultTraceCap));
        const ConditionReport d = check_condition_D(inst.map, inst.lambda, tr.points, kFamilyCheckTolerance);
        r.condition_violation = d.worst_violation;
        r.condition_passed = d.passed;
        r.witness = least_witness(tr.residuals, F, epsilon, opt.cap);
        r.step_witness = least_witness(tr.steps, F, epsilon, opt.cap);
    });
}

/// As uniform_bound, but the witness is taken on the iterates {x_n} under the
/// space metric, the map is checked against (E_mu), and beta(beta_k) is
/// estimated over the sample. The step witness is still reported.
inline FamilyResult uniform_bound_fixedpoint(const FamilySpec& family, const FSpec& F, double epsilon,
                                             const FamilyOptions& opt = {}) {
    detail::require_epsilon(epsilon);
    if (!(opt.mu >= 1.0)) throw ParameterError("condition (E_mu) requires mu >= 1");
    const std::size_t length = opt.trace_length.value_or(default_trace_length(F, opt.cap));
    FamilyResult out =
        detail::run_family(family, opt.workers, "fixedpoint", [&](const Instance& inst, InstanceResult& r) {
            const Space& space = inst.map.space();
            const IterationTrace tr =
                mann_iterate(inst.map, inst.x1, inst.lambda, length, std::max(length, kDefaultTraceCap));
            std::vector<Point> base(tr.points.begin(),
                                    tr.points.begin() + static_cast<std::ptrdiff_t>(std::min(opt.trace_sample, tr.size())));
            const std::vector<Point> random = sample_points(space, opt.sample_size, derive_seed(family.seed, r.index));
            base.insert(base.end(), random.begin(), random.end());
            const std::vector<Point> sample = checker_sample(inst.map, std::move(base));
            const ConditionReport e = check_condition_E(inst.map, opt.mu, sample, kFamilyCheckTolerance, 1);
            r.condition_violation = e.worst_violation;
            r.condition_passed = e.passed;
            r.beta = modulus_beta(space, sample, opt.beta_k);
            r.witness = least_witness(MetricOscillation(space, tr.points), F, epsilon, opt.cap);
            r.step_witness = least_witness(tr.steps, F, epsilon, opt.cap);
        });
    for (const auto& r : out.instances)
        if (r.beta) out.shared_beta = std::max(out.shared_beta.value_or(0), *r.beta);
    return out;
}

}  // namespace geometa
