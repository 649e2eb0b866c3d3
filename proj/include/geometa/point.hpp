#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>

#include "geometa/error.hpp"

namespace geometa {

/// Largest supported ambient dimension.
inline constexpr std::size_t kMaxDim = 8;

/// A point of a finite-dimensional space, stored inline.
///
/// The dimension is fixed by the owning space: 1 for intervals, d for boxes
/// and balls in R^d, 3 for the unit sphere.
class Point {
public:
    Point() = default;

    Point(std::initializer_list<double> coords) {
        if (coords.size() > kMaxDim) throw InvalidPointError("point dimension exceeds kMaxDim");
        dim_ = coords.size();
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    explicit Point(std::span<const double> coords) {
        if (coords.size() > kMaxDim) throw InvalidPointError("point dimension exceeds kMaxDim");
        dim_ = coords.size();
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    static Point zero(std::size_t dim) {
        if (dim > kMaxDim) throw InvalidPointError("point dimension exceeds kMaxDim");
        Point p;
        p.dim_ = dim;
        return p;
    }

    std::size_t dim() const noexcept { return dim_; }
    double operator[](std::size_t i) const noexcept { return c_[i]; }
    double& operator[](std::size_t i) noexcept { return c_[i]; }

    std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }
    std::span<double> coords() noexcept { return {c_.data(), dim_}; }

    friend bool operator==(const Point& a, const Point& b) noexcept {
        if (a.dim_ != b.dim_) return false;
        for (std::size_t i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

    friend std::ostream& operator<<(std::ostream& os, const Point& p) {
        os << '(';
        for (std::size_t i = 0; i < p.dim_; ++i) os << (i ? ", " : "") << p.c_[i];
        return os << ')';
    }

private:
    std::array<double, kMaxDim> c_{};
    std::size_t dim_ = 0;
};

/// (1 - t) a + t b, componentwise.
inline Point affine_combination(const Point& a, const Point& b, double t) noexcept {
    Point r = Point::zero(a.dim());
    const double s = 1.0 - t;
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i] + t * b[i];
    return r;
}

}  // namespace geometa
