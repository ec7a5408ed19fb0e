#pragma once

#include "ambig/credal.hpp"
#include "ambig/functionals.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ambig {

/// Verdict of a membership test. Sampled tests are one-sided: a witness is a
/// proof of non-membership, `member == true` only means the budget found none.
struct MembershipResult {
    bool member = true;
    bool exact = false;
    /// Refuting utility profile (or, for pointwise penalty comparisons, the
    /// probability vector where the inequality fails).
    std::optional<Vector> witness;
    double violation = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
};

/// min_{p in P} phi . p <= V(phi) on sampled phi. V must be IB.
MembershipResult pstar_member_generic(const CredalSet& P, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol = 1e-9);
/// max_{q in Q} phi . q >= V(phi) on sampled phi. V must be IB.
MembershipResult qstar_member_generic(const CredalSet& Q, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol = 1e-9);
/// min_p (phi . p + c(p)) <= V(phi) on sampled phi.
MembershipResult cstar_member_generic(const PenaltyFunction& c, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol = 1e-9);
/// max_q (phi . q - b(q)) >= V(phi) on sampled phi.
MembershipResult bstar_member_generic(const PenaltyFunction& b, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol = 1e-9);

/// alpha P1 contained in P - (1 - alpha) P2: for every vertex p1 of P1 some
/// p2 in P2 puts alpha p1 + (1 - alpha) p2 inside P.
bool pstar_member_alpha_meu(const CredalSet& P, const CredalSet& P1, const CredalSet& P2, double alpha);
/// (1 - alpha) P2 contained in Q - alpha P1.
bool qstar_member_alpha_meu(const CredalSet& Q, const CredalSet& P1, const CredalSet& P2, double alpha);

/// For every maximal chain, P meets {p : p(A_i) <= pi(A_i)}. Throws
/// CapabilityError for more than 8 states.
bool pstar_member_ceu(const CredalSet& P, const Capacity& pi);
/// For every maximal chain, Q meets {q : q(A_i) >= pi(A_i)}.
bool qstar_member_ceu(const CredalSet& Q, const Capacity& pi);

/// Membership of c in the maximal penalty family of the variational
/// preference with grounded penalty c0. With an unbounded utility range this
/// is the pointwise test c <= c0, run on a simplex grid plus the vertices of
/// the domains; with the bounded range it is the sampled test
/// min(phi . p + c) <= min(phi . p + c0).
MembershipResult vp_cstar_member(const PenaltyFunction& c, const PenaltyFunction& c0, bool unbounded_range,
                                 Range range, std::uint64_t trials, std::uint64_t seed,
                                 std::size_t grid_resolution = 60, double tol = 1e-9);

/// Membership of b in the maximal seeking family of the same preference.
/// Unbounded range: min_p (b + c0)(p) <= 0, solved as an LP (cutting planes
/// for entropic terms). Bounded range: by the minimax theorem
/// min_p (b + conjugate)(p) <= 0 is the same as
/// max(phi . q - b) >= min(phi . p + c0) for every phi in the box, which is
/// tested on samples.
MembershipResult vp_bstar_member(const PenaltyFunction& b, const PenaltyFunction& c0, bool unbounded_range,
                                 Range range, std::uint64_t trials, std::uint64_t seed, double tol = 1e-9);

/// Seeking family realizing alpha-MEU: {alpha P1 + (1 - alpha) p2 : p2 a vertex of P2}.
CredalFamily alpha_meu_seeking_family(const CredalSet& P1, const CredalSet& P2, double alpha);
/// Averse family realizing alpha-MEU: {alpha p1 + (1 - alpha) P2 : p1 a vertex of P1}.
CredalFamily alpha_meu_averse_family(const CredalSet& P1, const CredalSet& P2, double alpha);

/// For V = max_i min_{P_i}, the sets conv{argmin_{P_i} phi . p : i}, one per
/// anchor phi. Each lies in the maximal averse family of V and attains V at
/// its anchor.
CredalFamily averse_family_at_anchors(const CredalFamily& Ps, std::span<const Vector> anchors);

} // namespace ambig

namespace ambig {

/// Exact credal-set membership when the functional's recipe admits a closed
/// form (SEU, maxmin, maxmax, alpha-MEU, Choquet); nullopt otherwise.
std::optional<bool> exact_pstar_member(const CredalSet& P, const PreferenceFunctional& V);
std::optional<bool> exact_qstar_member(const CredalSet& Q, const PreferenceFunctional& V);

} // namespace ambig
