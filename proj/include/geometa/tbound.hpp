#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "geometa/error.hpp"
#include "geometa/point.hpp"
#include "geometa/space.hpp"

namespace geometa {

struct NetResult {
    double radius = 0.0;
    std::vector<Point> centers;
    std::vector<std::size_t> center_indices;  ///< into the sample; empty for non-sample centers
    bool covered = false;
    double max_uncovered_distance = 0.0;  ///< max over the sample of the distance to the nearest center
};

/// max over the sample of the distance to the nearest center.
inline double covering_radius(const Space& space, std::span<const Point> sample, std::span<const Point> centers) {
    if (centers.empty()) return std::numeric_limits<double>::infinity();
    return space.visit_metric([&](auto d) {
        double worst = 0.0;
        for (const Point& x : sample) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point& c : centers) best = std::min(best, d(x, c));
            worst = std::max(worst, best);
        }
        return worst;
    });
}

/// Farthest-point greedy net: the first center is sample[0], each next center
/// is the lowest-index sample point farthest from the current centers, until
/// every sample point is within `radius` of a center.
inline NetResult greedy_net(const Space& space, std::span<const Point> sample, double radius) {
    if (!(radius > 0.0)) throw ParameterError("net radius must be positive");
    if (sample.empty()) throw PreconditionError("net construction needs a nonempty sample");
    NetResult net;
    net.radius = radius;
    space.visit_metric([&](auto d) {
        std::vector<double> nearest(sample.size(), std::numeric_limits<double>::infinity());
        std::size_t next = 0;
        while (true) {
            net.centers.push_back(sample[next]);
            net.center_indices.push_back(next);
            double far = -1.0;
            std::size_t far_idx = 0;
            for (std::size_t i = 0; i < sample.size(); ++i) {
                nearest[i] = std::min(nearest[i], d(sample[i], sample[next]));
                if (nearest[i] > far) far = nearest[i], far_idx = i;
            }
            if (far <= radius) {
                net.max_uncovered_distance = far;
                break;
            }
            next = far_idx;
        }
        return 0;
    });
    net.covered = covering_radius(space, sample, net.centers) <= radius;
    return net;
}

/// Minimal cover of an interval sample by centers anywhere in the interval
/// (left-to-right sweep, optimal in one dimension).
inline NetResult interval_cover(const Space& space, std::span<const Point> sample, double radius) {
    if (space.kind() != SpaceKind::Interval) throw KindError("interval_cover needs an interval space");
    if (!(radius > 0.0)) throw ParameterError("net radius must be positive");
    if (sample.empty()) throw PreconditionError("net construction needs a nonempty sample");
    std::vector<double> xs;
    for (const Point& p : sample) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    const double reach = radius / space.scale();
    NetResult net;
    net.radius = radius;
    std::size_t i = 0;
    while (i < xs.size()) {
        double c = std::min(xs[i] + reach, space.upper()[0]);
        while (space.distance(Point{xs[i]}, Point{c}) > radius) c = std::nextafter(c, xs[i]);
        net.centers.push_back(Point{c});
        while (i < xs.size() && space.distance(Point{xs[i]}, Point{c}) <= radius) ++i;
    }
    net.max_uncovered_distance = covering_radius(space, sample, net.centers);
    net.covered = net.max_uncovered_distance <= radius;
    return net;
}

/// Upper estimate of the modulus of approximate total boundedness at k over
/// the sample: the number of centers needed at radius 1/(k+1), minus one, so
/// the centers are x_0 .. x_beta. Intervals use the optimal sweep, other
/// spaces the farthest-point greedy net.
inline std::size_t modulus_beta(const Space& space, std::span<const Point> sample, std::size_t k) {
    const double radius = 1.0 / static_cast<double>(k + 1);
    const NetResult net =
        space.kind() == SpaceKind::Interval ? interval_cover(space, sample, radius) : greedy_net(space, sample, radius);
    return net.centers.size() - 1;
}

struct AlphaFromBeta {
    std::size_t k = 0;      ///< least k with 2/(k+1) < 1/(K+1)
    std::size_t alpha = 0;  ///< beta(k)
};

/// Modulus of total boundedness from a modulus of approximate total
/// boundedness: K -> k -> beta(k) with k least such that 2/(k+1) < 1/(K+1).
inline AlphaFromBeta alpha_from_beta(const std::function<std::size_t(std::size_t)>& beta, std::size_t K) {
    // 2/(k+1) < 1/(K+1)  <=>  2(K+1) < k+1
    std::size_t k = 0;
    while (!(2 * (K + 1) < k + 1)) ++k;
    return {k, beta(k)};
}

}  // namespace geometa
