#pragma once

#include "ambig/credal.hpp"
#include "ambig/functionals.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ambig {

/// Outcome of a two-stage evaluation: the leader's member choice (lowest index
/// on ties) and the follower's best response to it.
struct LeaderValue {
    double value = 0.0;
    std::size_t leader = 0;
    ProbabilityVector follower;
};

/// max_{c in C} min_p (phi . p + c(p))
LeaderValue leader_seeking_value(std::span<const double> phi, const PenaltyFamily& C);
/// min_{b in B} max_q (phi . q - b(q))
LeaderValue leader_averse_value(std::span<const double> phi, const PenaltyFamily& B);
/// max_{P in family} min_{p in P} phi . p
LeaderValue ib_seeking_value(std::span<const double> phi, const CredalFamily& Ps);
/// min_{Q in family} max_{q in Q} phi . q
LeaderValue ib_averse_value(std::span<const double> phi, const CredalFamily& Qs);

PreferenceFunctional make_ib_seeking(CredalFamily Ps);
PreferenceFunctional make_ib_averse(CredalFamily Qs);
PreferenceFunctional make_leader_seeking(PenaltyFamily C);
PreferenceFunctional make_leader_averse(PenaltyFamily B);

struct SaddleReport {
    bool has_value = false;
    double maxmin = 0.0;
    /// min_p (phi . p + max_{c in C} c(p)); +inf when the domains do not meet.
    ExtendedReal minmax;
    std::optional<ProbabilityVector> minmax_argument;
    /// Upper bound on the error of minmax (0 when solved as an LP).
    double accuracy = 0.0;
};

/// Compares the leader-first value with the value of the game where the
/// probability is chosen first against the upper envelope of the family.
/// Indicator and polyhedral envelopes are minimized as one LP; entropic
/// members are handled by cutting planes, with the residual gap reported.
SaddleReport saddle_check_penalties(std::span<const double> phi, const PenaltyFamily& C, double tol = derived_tolerance);

enum class Collapse { none, maxmin, maxmax, seu };

const char* to_string(Collapse c);

struct CollapseReport {
    Collapse kind = Collapse::none;
    bool intersection_empty = false;
    /// Profile where the value differs from min over the intersection.
    std::optional<Vector> maxmin_witness;
    double maxmin_discrepancy = 0.0;
    /// Pair whose midpoint breaks convexity, ruling out a maxmax form.
    std::optional<std::pair<Vector, Vector>> maxmax_witness;
};

/// Classifies V = max_{P} min_{p in P} phi . p on the sampled profiles.
/// Maxmin collapse: V equals min over the intersection of the family.
/// Maxmax collapse: V is convex along all sampled midpoints, which for an IB
/// functional means it is a maximum over a single credal set.
/// Seu collapse: both.
CollapseReport collapse_detect(const CredalFamily& Ps, std::span<const Vector> sample_phis,
                               double tol = derived_tolerance);

} // namespace ambig
