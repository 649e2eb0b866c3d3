#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "geometa/error.hpp"

namespace geometa::formula {

/// Exact nonnegative-or-signed rational with 64-bit numerator and denominator,
/// kept in lowest terms with a positive denominator.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        if (den == 0) throw ParameterError("rational with zero denominator");
        normalize();
    }

    /// "n", "n/d" or "i.f" (exact decimal).
    static Rational parse(std::string_view s) {
        if (s.empty()) throw ParameterError("empty rational literal");
        if (const auto slash = s.find('/'); slash != std::string_view::npos)
            return Rational(digits(s.substr(0, slash)), digits(s.substr(slash + 1)));
        if (const auto dot = s.find('.'); dot != std::string_view::npos) {
            const std::string_view frac = s.substr(dot + 1);
            std::int64_t den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den = checked_mul(den, 10);
            const std::int64_t ip = digits(s.substr(0, dot));
            return Rational(checked_add(checked_mul(ip, den), frac.empty() ? 0 : digits(frac)), den);
        }
        return Rational(digits(s));
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num_, b.den_), -checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational abs(const Rational& a) { return Rational(a.num_ < 0 ? -a.num_ : a.num_, a.den_); }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

private:
    void normalize() {
        if (den_ < 0) num_ = -num_, den_ = -den_;
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) num_ /= g, den_ /= g;
    }

    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(a, b, &r)) throw ParameterError("rational overflow");
        return r;
    }
    static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_add_overflow(a, b, &r)) throw ParameterError("rational overflow");
        return r;
    }
    static std::int64_t digits(std::string_view s) {
        if (s.empty()) throw ParameterError("malformed rational literal");
        std::int64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw ParameterError("malformed rational literal");
            v = checked_add(checked_mul(v, 10), c - '0');
        }
        return v;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace geometa::formula
