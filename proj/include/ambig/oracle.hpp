#pragma once

// Brute-force reference computations. They are slow and simple on purpose and
// share no code with the optimized paths they are compared against.

#include "ambig/credal.hpp"
#include "ambig/domain.hpp"
#include "ambig/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ambig {

/// Largest grid simplex_grid will build.
inline constexpr std::uint64_t grid_budget = 10'000'000;

/// C(resolution + n - 1, n - 1), saturating at UINT64_MAX.
std::uint64_t simplex_grid_count(std::size_t n, std::size_t resolution);

/// Calls visit(p) for every point k / resolution of the simplex, first
/// coordinate descending. Throws CapabilityError past grid_budget.
void for_each_grid_point(std::size_t n, std::size_t resolution, const std::function<void(std::span<const double>)>& visit);

std::vector<ProbabilityVector> simplex_grid(std::size_t n, std::size_t resolution);

struct GridMinimum {
    ExtendedReal value = ExtendedReal::infinity();
    std::optional<ProbabilityVector> argument;
};

/// min over the grid of phi . p + c(p). For a Lipschitz objective the bias is
/// at most L * n / resolution.
GridMinimum grid_min_variational(std::span<const double> phi, const PenaltyFunction& c, std::size_t resolution);

/// min over the grid of phi . p + max_{c in family} c(p).
GridMinimum grid_min_envelope(std::span<const double> phi, std::span<const PenaltyFunction> family,
                              std::size_t resolution);

/// min over grid points inside P of phi . p; infinity when no grid point lies in P.
GridMinimum grid_min_linear(std::span<const double> phi, const CredalSet& P, std::size_t resolution);

/// Maximal chain of events, A[0] = {} up to A[n] = S.
using Chain = std::vector<Event>;

/// One chain per permutation of the states, in lexicographic permutation order.
std::vector<Chain> enumerate_maximal_chains(std::size_t n);

/// Choquet integral as min(phi) + integral over t of pi({phi >= t}).
double choquet_by_thresholds(std::span<const double> phi, const Capacity& pi);

/// Both orders of play in the game where two players pick vertices p_seek and
/// p_averse of P and the payoff is phi . ((1 - alpha) p_seek + alpha p_averse).
struct SaddleValues {
    double maxmin = 0.0;
    double minmax = 0.0;
};
SaddleValues combined_prior_game(std::span<const double> phi, std::span<const ProbabilityVector> vertices,
                                 double alpha);

/// Utility profiles for falsification: all vertices of [lo, hi]^n first (when
/// n <= 12), then a mix of uniform draws, comonotone ramps, two-level profiles
/// and profiles with many coordinates at the bounds.
class PhiSampler {
public:
    PhiSampler(std::size_t n, Range range);

    Vector operator()(Rng& rng, std::uint64_t index) const;

    std::size_t dimension() const { return n_; }
    const Range& range() const { return range_; }
    std::uint64_t vertex_count() const { return vertex_count_; }

private:
    std::size_t n_;
    Range range_;
    std::uint64_t vertex_count_;
};

template <class T>
struct FalsifyResult {
    std::optional<T> witness;
    /// Index of the trial that produced the witness.
    std::uint64_t index = 0;
    /// Trials evaluated.
    std::uint64_t trials = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;

    bool refuted() const { return witness.has_value(); }
};

/// Evaluates holds(sample(rng_i, i)) for i = 0, 1, ... with rng_i derived from
/// (seed, i) and stops at the first failure.
template <class Sampler, class Property>
auto falsify(Sampler&& sample, Property&& holds, std::uint64_t budget, std::uint64_t seed) {
    using T = std::decay_t<decltype(sample(std::declval<Rng&>(), std::uint64_t{}))>;
    FalsifyResult<T> result;
    result.budget = budget;
    result.seed = seed;
    for (std::uint64_t i = 0; i < budget; ++i) {
        Rng rng = Rng::for_trial(seed, i);
        T input = sample(rng, i);
        ++result.trials;
        if (!holds(static_cast<const T&>(input))) {
            result.witness = std::move(input);
            result.index = i;
            break;
        }
    }
    return result;
}

/// Random points and sets used by tests and acceptance runs.
ProbabilityVector random_probability(Rng& rng, std::size_t n);
/// Convex hull of `count` random points of the simplex.
CredalSet random_credal_set(Rng& rng, std::size_t n, std::size_t count);
/// Random monotone normalized set function.
Capacity random_capacity(Rng& rng, std::size_t n);
/// Random belief function (nonnegative Moebius masses), hence convex.
Capacity random_belief_function(Rng& rng, std::size_t n);

} // namespace ambig
