#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace ambig {

/// A value in (-inf, +inf]. Penalties and their sums live here: +inf marks
/// points outside the effective domain and survives min/max/addition.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {} // NOLINT(implicit)

    static constexpr ExtendedReal infinity() {
        return ExtendedReal(std::numeric_limits<double>::infinity());
    }

    constexpr bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_finite() const { return !is_infinite(); }

    /// Finite value; callers check is_finite() first.
    constexpr double value() const { return value_; }

    friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }
    friend constexpr ExtendedReal operator-(ExtendedReal a, double b) {
        if (a.is_infinite()) return infinity();
        return ExtendedReal(a.value_ - b);
    }
    friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) = default;
    friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.value_ <=> b.value_; }

    friend std::ostream& operator<<(std::ostream& os, ExtendedReal x) {
        if (x.is_infinite()) return os << "+inf";
        return os << x.value_;
    }

private:
    double value_ = 0.0;
};

inline ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }
inline ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }

} // namespace ambig
