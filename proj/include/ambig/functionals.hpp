#pragma once

#include "ambig/credal.hpp"
#include "ambig/domain.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ambig {

// ---------------------------------------------------------------------------
// Atomic evaluators

double seu_value(std::span<const double> phi, const ProbabilityVector& p0);

/// min over P of phi . p, with the minimizing prior.
Extremum maxmin_eu(std::span<const double> phi, const CredalSet& P);
Extremum maxmax_eu(std::span<const double> phi, const CredalSet& P);

/// alpha * min_{P1} + (1 - alpha) * max_{P2}.
double alpha_meu(std::span<const double> phi, const CredalSet& P1, const CredalSet& P2, double alpha);

/// Layer formula over merged level sets; negative values handled by shifting
/// phi by its minimum.
double choquet_value(std::span<const double> phi, const Capacity& pi);

/// min over the simplex of phi . p + c(p), with a minimizer. Entropic penalties
/// use the closed form -theta log sum q exp(-phi / theta).
Extremum variational_value(std::span<const double> phi, const PenaltyFunction& c);

/// max over the simplex of phi . q - b(q), with a maximizer.
Extremum seeking_variational_value(std::span<const double> phi, const PenaltyFunction& b);

// ---------------------------------------------------------------------------
// Functionals with capability flags

enum class Flag { unknown, asserted, refuted };

const char* to_string(Flag f);

struct Flags {
    Flag monotone = Flag::unknown;
    Flag translation_invariant = Flag::unknown;
    Flag positively_homogeneous = Flag::unknown;
    Flag concave = Flag::unknown;
    Flag convex = Flag::unknown;
    Flag normalized = Flag::unknown;

    bool operator==(const Flags&) const = default;
};

/// What a functional was built from. Exact algorithms dispatch on this; a
/// custom functional offers only its evaluator.
namespace recipe {
struct Seu {
    ProbabilityVector p;
};
struct Maxmin {
    CredalSet set;
};
struct Maxmax {
    CredalSet set;
};
struct AlphaMeu {
    CredalSet averse;
    CredalSet seeking;
    double alpha;
};
struct Choquet {
    Capacity capacity;
};
struct Variational {
    PenaltyFunction penalty;
};
struct Seeking {
    PenaltyFunction penalty;
};
struct IbSeeking {
    CredalFamily family;
};
struct IbAverse {
    CredalFamily family;
};
struct LeaderSeeking {
    PenaltyFamily family;
};
struct LeaderAverse {
    PenaltyFamily family;
};
struct Custom {
    std::string name;
};
} // namespace recipe

using Recipe = std::variant<recipe::Seu, recipe::Maxmin, recipe::Maxmax, recipe::AlphaMeu, recipe::Choquet,
                            recipe::Variational, recipe::Seeking, recipe::IbSeeking, recipe::IbAverse,
                            recipe::LeaderSeeking, recipe::LeaderAverse, recipe::Custom>;

std::string describe(const Recipe& r);

class PreferenceFunctional {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    PreferenceFunctional(std::size_t n, Evaluator evaluator, Flags flags, Recipe recipe);

    double operator()(std::span<const double> phi) const;

    std::size_t dimension() const { return n_; }
    const Flags& flags() const { return flags_; }
    const Recipe& recipe() const { return recipe_; }
    std::string describe() const { return ambig::describe(recipe_); }

    bool is_niveloid() const {
        return flags_.monotone == Flag::asserted && flags_.translation_invariant == Flag::asserted;
    }
    bool is_normalized_niveloid() const { return is_niveloid() && flags_.normalized == Flag::asserted; }

    /// Copy carrying flags established by a checker.
    PreferenceFunctional with_flags(Flags flags) const;

private:
    std::size_t n_;
    Evaluator evaluator_;
    Flags flags_;
    Recipe recipe_;
};

PreferenceFunctional make_seu(ProbabilityVector p);
PreferenceFunctional make_maxmin(CredalSet P);
PreferenceFunctional make_maxmax(CredalSet P);
PreferenceFunctional make_alpha_meu(CredalSet averse, CredalSet seeking, double alpha);
PreferenceFunctional make_choquet(Capacity pi);
PreferenceFunctional make_variational(PenaltyFunction c);
PreferenceFunctional make_seeking(PenaltyFunction b);
/// Wraps an arbitrary evaluator; every flag starts out unknown unless given.
PreferenceFunctional make_custom(std::size_t n, PreferenceFunctional::Evaluator evaluator, std::string name,
                                 Flags flags = {});

/// A normalized niveloid on B0(S, T).
class PreferenceHandle {
public:
    /// Throws CapabilityError unless monotone, translation invariance and
    /// normalization are asserted.
    PreferenceHandle(PreferenceFunctional functional, Range range);

    const PreferenceFunctional& functional() const { return functional_; }
    const Range& range() const { return range_; }
    std::size_t dimension() const { return functional_.dimension(); }
    /// Positively homogeneous as well, i.e. an IB functional.
    bool is_ib() const { return functional_.flags().positively_homogeneous == Flag::asserted; }
    double operator()(std::span<const double> phi) const { return functional_(phi); }

private:
    PreferenceFunctional functional_;
    Range range_;
};

// ---------------------------------------------------------------------------
// Randomized axiom checks

enum class Property { monotone, translation_invariant, positively_homogeneous, concave, convex, normalized };

const char* to_string(Property p);

struct PropertyWitness {
    Property property;
    /// Inputs of the violated inequality; second is empty for normalization.
    Vector first;
    Vector second;
    /// Amount by which the inequality fails.
    double violation = 0.0;
    std::uint64_t trial = 0;
};

struct NiveloidReport {
    Flags flags;
    std::vector<PropertyWitness> witnesses;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    const PropertyWitness* witness(Property p) const;
};

/// Samples utility profiles in the range and tests every property on each
/// trial. A flag is refuted by the first witness and asserted when the budget
/// runs out without one. `tol` is scaled by 1 + the magnitudes involved.
NiveloidReport check_niveloid(const PreferenceFunctional& V, Range range, std::uint64_t trials, std::uint64_t seed,
                              double tol = 1e-9);

} // namespace ambig
