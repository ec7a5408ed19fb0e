#pragma once

#include "ambig/credal.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ambig {

struct ProgramSolution {
    ExtendedReal value;
    std::optional<ProbabilityVector> argument;
    /// Certified upper bound on value - true minimum (0 for pure LP programs).
    double gap = 0.0;
    int iterations = 0;
    bool exact = false;
};

/// Convex minimization over the simplex of
///     phi . p + sum_g max_{c in group g} c(p)
/// optionally restricted to a set of credal sets.
///
/// Indicator and polyhedral penalties enter as linear rows, so programs built
/// from them are single LPs. Entropic penalties are handled by Kelley's cutting
/// plane method on their tangent planes; the returned gap is the distance
/// between the best feasible value and the LP lower bound.
class PenaltyProgram {
public:
    explicit PenaltyProgram(std::size_t n);

    PenaltyProgram& add_linear(std::span<const double> phi);
    PenaltyProgram& add_term(const PenaltyFunction& c);
    PenaltyProgram& add_envelope(std::vector<PenaltyFunction> group);
    PenaltyProgram& restrict_to(const CredalSet& set);

    ProgramSolution minimize(double tol = 1e-10, int max_iterations = 3000) const;

    /// True objective at p.
    ExtendedReal objective(std::span<const double> p) const;

private:
    std::size_t n_;
    Vector linear_;
    std::vector<std::vector<PenaltyFunction>> groups_;
    std::vector<CredalSet> restrictions_;
};

} // namespace ambig
