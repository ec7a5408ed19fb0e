#pragma once

#include "ambig/credal.hpp"
#include "ambig/functionals.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ambig {

struct ExtensionResult {
    double value = 0.0;
    /// Maximizing phi in [lo, hi]^n.
    Vector argument;
    /// How far the verifying search got above the closed-form candidate
    /// (0 when the candidate was confirmed, as it is for every niveloid).
    double search_gain = 0.0;
    bool on_domain = false;
};

/// Least niveloid extension of I from B0(S, T) to all of R^n:
///     sup_{phi in [lo, hi]^n} I(phi) + min_s (psi_s - phi_s).
/// With m = min psi, the sup is attained at phi = min(hi, psi - m + lo) by
/// monotonicity and translation invariance; a coordinate search around that
/// point and around the clamp of psi confirms it. On-domain psi returns I(psi).
/// Throws CapabilityError unless I is an asserted niveloid.
ExtensionResult extend_niveloid(const PreferenceFunctional& I, Range range, std::span<const double> psi,
                                bool verify = true);

/// max over a box grid of I(phi) + min(psi - phi), phi in [lo, hi]^n with
/// `resolution` steps per axis. A lower bound on the least extension at psi.
/// Throws CapabilityError past grid_budget points.
double extension_grid_oracle(const PreferenceFunctional& I, Range range, std::span<const double> psi,
                             std::size_t resolution);

/// Niveloid given by its upper level set {phi : I(phi) >= 0}.
struct LevelSetNiveloid {
    std::function<bool(std::span<const double>)> generator;
    bool cone = false;
    bool convex = false;

    /// {phi : V(phi) >= 0}; cone and convex flags from positive homogeneity and concavity.
    static LevelSetNiveloid from_functional(const PreferenceFunctional& V);
};

/// sup{alpha : psi - alpha in Phi} by bisection to 1e-9 on
/// [min psi - hi, max psi - lo] (widened when the bracket does not straddle the
/// boundary). Throws InvariantError when the membership answers are not
/// monotone in alpha.
double levelset_value(const LevelSetNiveloid& L, std::span<const double> psi, Range range, double tol = 1e-9);

/// Finite family of niveloids built at anchors psi_k:
///     concave  J_k(x) = min_s (x_s - psi_k,s) + I(psi_k)   (value: max over k)
///     convex   K_k(x) = max_s (x_s - psi_k,s) + I(psi_k)   (value: min over k)
class AnchorFamily {
public:
    AnchorFamily(std::vector<Vector> anchors, std::vector<double> levels, bool concave);

    std::size_t size() const { return anchors_.size(); }
    bool concave() const { return concave_; }
    const std::vector<Vector>& anchors() const { return anchors_; }
    const std::vector<double>& levels() const { return levels_; }

    double member(std::size_t k, std::span<const double> x) const;
    /// max over members (concave family) or min over members (convex family).
    double operator()(std::span<const double> x) const;

    PreferenceFunctional member_functional(std::size_t k) const;

private:
    std::vector<Vector> anchors_;
    std::vector<double> levels_;
    bool concave_;
};

AnchorFamily decompose_sup_concave(const PreferenceFunctional& I, std::span<const Vector> anchors);
AnchorFamily decompose_inf_convex(const PreferenceFunctional& I, std::span<const Vector> anchors);

struct ConjugateResult {
    ExtendedReal value;
    /// Computed from a known penalty, as opposed to a search lower bound.
    bool exact = false;
    /// I was not asserted concave: the value describes its concave envelope.
    bool envelope = false;
    /// The penalty itself when the exact path applies.
    std::optional<PenaltyFunction> penalty;
    std::optional<Vector> maximizer;
    std::uint64_t evaluations = 0;
};

struct ConjugateSearch {
    std::uint64_t samples = 400;
    std::uint64_t seed = 1;
    int refinement_rounds = 40;
};

/// c(p) = sup_phi (I(phi) - phi . p). Known recipes are answered exactly
/// (indicators by membership, variational penalties by evaluation, convex
/// Choquet by its core). Anything else is searched over [lo, hi]^n, which is
/// the conjugate of the least extension of I restricted to the range; the
/// result is then a lower bound.
ConjugateResult conjugate_penalty(const PreferenceFunctional& I, Range range, std::span<const double> p,
                                  const ConjugateSearch& search = {});

/// The penalty that answers conjugate_penalty exactly, when there is one.
std::optional<PenaltyFunction> known_conjugate(const PreferenceFunctional& I);

struct FenchelResult {
    ExtendedReal value;
    std::optional<ProbabilityVector> argument;
    double gap = 0.0;
    bool exact = false;
};

/// min over the simplex of b(p) + c(p); +inf for disjoint domains. Two
/// entropic penalties have the closed form
///     -(t1 + t2) log sum q1^(t1/(t1+t2)) q2^(t2/(t1+t2)).
FenchelResult fenchel_gap(const PenaltyFunction& b, const PenaltyFunction& c);

/// inf over sampled phi in [-radius, radius]^n of
///     max_q (phi . q - b(q)) - min_p (phi . p + c(p)),
/// an upper bound on -fenchel_gap(b, c).
double fenchel_sampled_bound(const PenaltyFunction& b, const PenaltyFunction& c, double radius, std::uint64_t trials,
                             std::uint64_t seed);

} // namespace ambig
