#pragma once

#include "ambig/domain.hpp"
#include "ambig/extended_real.hpp"
#include "ambig/lp.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ambig {

/// Point of the standard simplex over the states.
class ProbabilityVector {
public:
    /// Entries must be >= -tol and sum to 1 within tol.
    explicit ProbabilityVector(Vector p, double tol = membership_tolerance);

    static ProbabilityVector uniform(std::size_t n);
    static ProbabilityVector unit(std::size_t n, std::size_t s);

    const Vector& values() const { return p_; }
    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t s) const { return p_[s]; }
    /// Probability of an event.
    double of(Event a) const;

    operator std::span<const double>() const { return p_; } // NOLINT(implicit)
    bool operator==(const ProbabilityVector&) const = default;

private:
    Vector p_;
};

/// a . p (sense) bound
struct LinearConstraint {
    Vector coefficients;
    lp::Sense sense = lp::Sense::less_equal;
    double bound = 0.0;

    bool satisfied_by(std::span<const double> p, double tol) const;
    bool operator==(const LinearConstraint&) const = default;
};

/// Optimum of a linear functional over a credal set.
struct Extremum {
    double value = 0.0;
    ProbabilityVector argument;
    /// Index of the optimal vertex when the vertex list was used.
    std::optional<std::size_t> vertex;
};

/// Convex compact subset of the simplex, held as a vertex list, a system of
/// linear constraints intersected with the simplex, or both. The authority tag
/// records which representation the set was defined by; conversions happen only
/// through explicit calls.
class CredalSet {
public:
    enum class Authority { vertices, halfspaces };

    static CredalSet from_vertices(std::vector<ProbabilityVector> vertices);
    /// Throws EmptySetError when the system has no point in the simplex.
    static CredalSet from_halfspaces(std::size_t n, std::vector<LinearConstraint> constraints);
    /// Both representations, which the caller asserts describe the same set.
    static CredalSet from_both(std::vector<ProbabilityVector> vertices, std::vector<LinearConstraint> constraints,
                               Authority authority);
    static CredalSet simplex(std::size_t n);
    static CredalSet singleton(const ProbabilityVector& p);

    std::size_t dimension() const { return n_; }
    Authority authority() const { return authority_; }
    bool has_vertices() const { return !vertices_.empty(); }
    bool has_halfspaces() const { return has_halfspaces_; }
    /// Vertex list; throws CapabilityError when only the H-representation exists.
    const std::vector<ProbabilityVector>& vertices() const;
    const std::vector<LinearConstraint>& halfspaces() const { return constraints_; }

    /// Copy with the vertex list computed by enumeration when absent.
    CredalSet with_vertices() const;

    bool contains(std::span<const double> p, double tol = membership_tolerance) const;
    bool is_singleton(double tol = membership_tolerance) const;

    /// min / max of phi . p; ties go to the lowest vertex index.
    Extremum minimize(std::span<const double> phi) const;
    Extremum maximize(std::span<const double> phi) const;

    /// Adds rows forcing the LP variables `p` (one per state) into this set.
    void constrain(lp::Problem& problem, std::span<const std::size_t> p) const;

    /// Vertices sampled against constraints and enumerated vertices tested against
    /// the hull of the vertex list. True when only one representation exists.
    bool representations_agree(double tol = derived_tolerance) const;

    bool operator==(const CredalSet&) const = default;

private:
    CredalSet() = default;
    std::size_t n_ = 0;
    Authority authority_ = Authority::vertices;
    std::vector<ProbabilityVector> vertices_;
    std::vector<LinearConstraint> constraints_;
    bool has_halfspaces_ = false;
};

/// Adds n nonnegative LP variables summing to one; returns their indices.
std::vector<std::size_t> add_simplex_variables(lp::Problem& problem, std::size_t n);

/// Vertices of {p in simplex : constraints}; lexicographic order, duplicates merged.
std::vector<ProbabilityVector> enumerate_vertices(std::size_t n, std::span<const LinearConstraint> constraints);

/// Some point common to all sets, if any.
std::optional<ProbabilityVector> common_point(std::span<const CredalSet> sets);
/// Optimum of phi . p over the intersection of the sets; nullopt when empty.
std::optional<Extremum> optimize_over_intersection(std::span<const CredalSet> sets, std::span<const double> phi,
                                                   bool maximize);

/// Normalized monotone set function on all events of a finite state space.
class Capacity {
public:
    /// values[A] for every bitmask A; checks normalization and monotonicity.
    Capacity(std::size_t n, Vector values);
    static Capacity additive(const ProbabilityVector& p);

    std::size_t states() const { return n_; }
    double operator()(Event a) const { return values_[a]; }
    const Vector& values() const { return values_; }
    bool operator==(const Capacity&) const = default;

private:
    std::size_t n_;
    Vector values_;
};

/// Supermodularity over all event pairs. Throws CapabilityError for n > 12.
bool capacity_is_convex(const Capacity& pi, double tol = 1e-12);

/// {p : p(A) >= pi(A) for all A}; nullopt when empty. Throws CapabilityError for n > 6.
std::optional<CredalSet> capacity_core(const Capacity& pi);

struct AffinePiece {
    Vector slope;
    double intercept = 0.0;
    bool operator==(const AffinePiece&) const = default;
};

/// Convex lower semicontinuous penalty c on the simplex, valued in (-inf, +inf].
class PenaltyFunction {
public:
    struct Indicator {
        CredalSet set;
        bool operator==(const Indicator&) const = default;
    };
    struct Polyhedral {
        std::vector<AffinePiece> pieces;
        CredalSet domain;
        bool operator==(const Polyhedral&) const = default;
    };
    struct Entropic {
        ProbabilityVector reference;
        double theta;
        bool operator==(const Entropic&) const = default;
    };
    using Kind = std::variant<Indicator, Polyhedral, Entropic>;

    static PenaltyFunction indicator(CredalSet set);
    /// max_k (slope_k . p + intercept_k) on the domain, +inf off it.
    static PenaltyFunction polyhedral(std::vector<AffinePiece> pieces, CredalSet domain);
    /// theta * KL(p || reference).
    static PenaltyFunction entropic(ProbabilityVector reference, double theta);

    /// Same penalty plus a constant.
    PenaltyFunction plus(double constant) const;

    const Kind& kind() const { return kind_; }
    double offset() const { return offset_; }
    std::size_t dimension() const;
    bool is_entropic() const { return std::holds_alternative<Entropic>(kind_); }
    /// Polytope carrying the effective domain; nullptr for entropic penalties.
    const CredalSet* domain() const;
    std::string describe() const;

    bool operator==(const PenaltyFunction&) const = default;

private:
    explicit PenaltyFunction(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
    double offset_ = 0.0;
};

ExtendedReal evaluate_penalty(const PenaltyFunction& c, std::span<const double> p);

/// Minimum of c over the simplex and a minimizer.
struct PenaltyMinimum {
    ExtendedReal value;
    ProbabilityVector argument;
};
PenaltyMinimum minimize_penalty(const PenaltyFunction& c);

struct PenaltyFamily {
    std::vector<PenaltyFunction> members;
    explicit PenaltyFamily(std::vector<PenaltyFunction> m);
    bool operator==(const PenaltyFamily&) const = default;
};

struct CredalFamily {
    std::vector<CredalSet> members;
    explicit CredalFamily(std::vector<CredalSet> m);
    bool operator==(const CredalFamily&) const = default;
};

struct GroundednessReport {
    bool grounded = false;
    /// sup over members of min over the simplex.
    double sup_of_minima = 0.0;
    std::size_t member = 0;
    ProbabilityVector minimizer;
};

GroundednessReport is_grounded(const PenaltyFamily& family, double tol = derived_tolerance);

} // namespace ambig
