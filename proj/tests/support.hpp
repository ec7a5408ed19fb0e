#pragma once

#include "ambig/credal.hpp"
#include "ambig/domain.hpp"

#include <cmath>

namespace support {

using namespace ambig;

inline ProbabilityVector pv(Vector v) { return ProbabilityVector(std::move(v)); }

/// {p : p(red) = 1/3} on red, black, yellow.
inline CredalSet ellsberg() {
    return CredalSet::from_vertices({pv({1.0 / 3, 2.0 / 3, 0.0}), pv({1.0 / 3, 0.0, 2.0 / 3})});
}

inline CredalSet ellsberg_h() {
    return CredalSet::from_halfspaces(3, {{{1.0, 0.0, 0.0}, lp::Sense::equal, 1.0 / 3}});
}

inline Capacity capacity_from(std::size_t n, double (*f)(double), const Vector& p) {
    Vector values(std::size_t{1} << n);
    for (std::size_t a = 0; a < values.size(); ++a) {
        double mass = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            if (a & (std::size_t{1} << s)) mass += p[s];
        values[a] = f(mass);
    }
    values.back() = 1.0;
    return Capacity(n, values);
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace support
