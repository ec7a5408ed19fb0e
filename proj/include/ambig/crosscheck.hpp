#pragma once

// Independent recomputation of functional values for side-by-side oracle
// columns. Linear programs are replaced by vertex enumeration, closed forms by
// solving the optimality conditions, and layer sums by threshold integration.

#include "ambig/credal.hpp"
#include "ambig/functionals.hpp"

#include <optional>
#include <span>

namespace ambig {

/// min over the simplex of phi . p + c(p): indicator and polyhedral penalties
/// by enumerating the vertices of every linearity cell, entropic penalties
/// through their optimality conditions.
double variational_oracle(std::span<const double> phi, const PenaltyFunction& c);

struct EnvelopeOracle {
    ExtendedReal value;
    /// False when a grid had to stand in (a domain known only by vertices, or
    /// an entropic member); the grid value then only bounds the minimum from above.
    bool exact = false;
};

/// min over the simplex of phi . p + max_{c in family} c(p).
EnvelopeOracle envelope_oracle(std::span<const double> phi, std::span<const PenaltyFunction> family,
                               std::size_t grid_resolution = 200);

/// Recomputes V(phi) from its recipe; nullopt for custom functionals.
std::optional<double> functional_oracle(const PreferenceFunctional& V, std::span<const double> phi);

struct OracleCheck {
    double value = 0.0;
    std::optional<double> oracle;
    double discrepancy = 0.0;
    /// discrepancy > tol * (1 + |value|).
    bool flagged = false;
};

/// V(phi) beside functional_oracle(V, phi).
OracleCheck check_against_oracle(const PreferenceFunctional& V, std::span<const double> phi, double tol);

/// Compares two already computed numbers the same way.
OracleCheck compare_values(double value, std::optional<double> oracle, double tol);

} // namespace ambig
