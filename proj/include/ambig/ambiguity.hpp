#pragma once

#include "ambig/credal.hpp"
#include "ambig/functionals.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace ambig {

// Constants are their own certainty equivalents under a normalized V, so
// "V2 accepts x over f implies V1 does" for all acts f and constants x means
// V2(phi) <= x implies V1(phi) <= x, i.e. V1(phi) <= V2(phi) for every phi.

struct ComparisonResult {
    bool holds = true;
    /// Profile with V1(phi) > V2(phi).
    std::optional<Vector> witness;
    double violation = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
};

/// Sampled test of V1 <= V2 (V1 at least as ambiguity averse as V2).
/// Throws InputError when the handles live on different ranges.
ComparisonResult more_averse(const PreferenceHandle& V1, const PreferenceHandle& V2, std::uint64_t trials,
                             std::uint64_t seed, double tol = 1e-9);

enum class ProbeKind { pstar, qstar, cstar, bstar };

const char* to_string(ProbeKind k);

struct Probe {
    ProbeKind kind;
    std::variant<CredalSet, PenaltyFunction> object;
};

struct ProbeOutcome {
    ProbeKind kind;
    bool in_first = false;
    bool in_second = false;
    /// Membership was decided by a closed form for both preferences.
    bool exact = false;
    /// Agrees with the inclusion implied by the comparison.
    bool consistent = true;
};

struct FamilyReport {
    /// Whether V1 <= V2 held on the sample; inclusions are only implied then.
    bool premise = false;
    bool consistent = true;
    std::vector<ProbeOutcome> outcomes;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Evaluates each probe in both maximal families (closed forms where the
/// recipe allows, sampling otherwise, same seed on both sides) and checks the
/// inclusions that V1 <= V2 implies: C1* in C2*, P1* in P2*, B2* in B1*,
/// Q2* in Q1*.
FamilyReport family_comparison(const PreferenceHandle& V1, const PreferenceHandle& V2, const std::vector<Probe>& probes,
                               std::uint64_t trials, std::uint64_t seed);

/// Finite set of profiles phi_i with weights w such that
///     max_s sum_i w_i phi_i[s] < sum_i w_i V(phi_i),
/// which rules out any p with phi_i . p >= V(phi_i) for all i.
struct InfeasibilityCertificate {
    std::vector<Vector> profiles;
    std::vector<double> values;
    std::vector<double> weights;
    /// sum_i w_i V(phi_i) - max_s sum_i w_i phi_i[s], positive when valid.
    double margin = 0.0;
};

struct AversionResult {
    bool averse = false;
    std::optional<ProbabilityVector> benchmark;
    std::optional<InfeasibilityCertificate> certificate;
    int rounds = 0;
    std::uint64_t trials = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
};

/// Looks for p0 with V(phi) <= phi . p0 for all phi by alternating an LP over
/// the profiles seen so far with a falsification search against the
/// candidate. Each violating profile enters the LP together with its
/// reflection lo + hi - phi.
AversionResult is_ambiguity_averse(const PreferenceHandle& V, std::uint64_t trials, std::uint64_t seed,
                                   double tol = derived_tolerance);

/// Recomputes V at the certificate profiles and the margin from scratch.
bool verify_certificate(const InfeasibilityCertificate& cert, const PreferenceHandle& V, double tol = 1e-12);

} // namespace ambig
