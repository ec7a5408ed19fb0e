#include "ambig/extension.hpp"

#include "ambig/errors.hpp"
#include "ambig/oracle.hpp"
#include "ambig/program.hpp"

#include <algorithm>
#include <cmath>

namespace ambig {

namespace {

/// Derivative-free ascent in the box: coordinate and diagonal moves with a
/// shrinking step.
double pattern_ascent(const std::function<double(std::span<const double>)>& f, Vector& x, Range range,
                      int rounds, std::uint64_t& evaluations) {
    const std::size_t n = x.size();
    double best = f(x);
    ++evaluations;
    double step = range.width() / 4.0;
    auto clamp = [&](double v) { return std::clamp(v, range.lo, range.hi); };
    for (int round = 0; round < rounds && step > range.width() * 1e-10; ++round) {
        bool improved = false;
        auto attempt = [&](const Vector& y) {
            const double v = f(y);
            ++evaluations;
            if (v > best + 1e-15 * (1.0 + std::abs(best))) {
                best = v;
                x = y;
                improved = true;
            }
        };
        for (std::size_t s = 0; s < n; ++s)
            for (double dir : {1.0, -1.0}) {
                Vector y = x;
                y[s] = clamp(y[s] + dir * step);
                if (y[s] != x[s]) attempt(y);
            }
        for (double dir : {1.0, -1.0}) {
            Vector y = x;
            for (double& v : y) v = clamp(v + dir * step);
            if (y != x) attempt(y);
        }
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t)
                for (double dir : {1.0, -1.0}) {
                    Vector y = x;
                    y[s] = clamp(y[s] + dir * step);
                    y[t] = clamp(y[t] - dir * step);
                    if (y != x) attempt(y);
                }
        if (!improved) step /= 2.0;
    }
    return best;
}

} // namespace

double extension_grid_oracle(const PreferenceFunctional& I, Range range, std::span<const double> psi,
                             std::size_t resolution) {
    const std::size_t n = psi.size();
    if (n != I.dimension()) throw InputError("dimension mismatch");
    if (resolution == 0) throw InputError("grid resolution must be positive");
    double points = 1.0;
    for (std::size_t s = 0; s < n; ++s) points *= static_cast<double>(resolution + 1);
    if (points > static_cast<double>(grid_budget))
        throw CapabilityError("box grid of " + std::to_string(points) + " points exceeds the budget");
    std::vector<std::size_t> index(n, 0);
    Vector phi(n);
    double best = -std::numeric_limits<double>::infinity();
    for (;;) {
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) {
            phi[s] = range.lo + range.width() * static_cast<double>(index[s]) / static_cast<double>(resolution);
            slack = std::min(slack, psi[s] - phi[s]);
        }
        best = std::max(best, I(phi) + slack);
        std::size_t s = 0;
        while (s < n && ++index[s] > resolution) index[s++] = 0;
        if (s == n) break;
    }
    return best;
}

ExtensionResult extend_niveloid(const PreferenceFunctional& I, Range range, std::span<const double> psi, bool verify) {
    if (!I.is_niveloid()) throw CapabilityError("extension needs an asserted niveloid: " + I.describe());
    if (psi.size() != I.dimension()) throw InputError("dimension mismatch");
    ExtensionResult out;
    if (range.contains(psi)) {
        out.value = I(psi);
        out.argument.assign(psi.begin(), psi.end());
        out.on_domain = true;
        return out;
    }
    const double m = min_of(psi);
    auto objective = [&](std::span<const double> phi) {
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < psi.size(); ++s) slack = std::min(slack, psi[s] - phi[s]);
        return I(phi) + slack;
    };
    Vector candidate(psi.size());
    for (std::size_t s = 0; s < psi.size(); ++s) candidate[s] = std::min(range.hi, psi[s] - m + range.lo);
    out.value = objective(candidate);
    out.argument = candidate;
    if (!verify) return out;

    std::uint64_t evaluations = 0;
    Vector clamped(psi.size());
    for (std::size_t s = 0; s < psi.size(); ++s) clamped[s] = std::clamp(psi[s], range.lo, range.hi);
    for (Vector start : {candidate, clamped}) {
        const double v = pattern_ascent(objective, start, range, 60, evaluations);
        if (v > out.value) {
            out.search_gain = std::max(out.search_gain, v - objective(candidate));
            out.value = v;
            out.argument = start;
        }
    }
    return out;
}

LevelSetNiveloid LevelSetNiveloid::from_functional(const PreferenceFunctional& V) {
    LevelSetNiveloid L;
    L.generator = [V](std::span<const double> phi) { return V(phi) >= 0.0; };
    L.cone = V.flags().positively_homogeneous == Flag::asserted;
    L.convex = V.flags().concave == Flag::asserted;
    return L;
}

double levelset_value(const LevelSetNiveloid& L, std::span<const double> psi, Range range, double tol) {
    auto inside = [&](double alpha) { return L.generator(shifted(psi, -alpha)); };
    double low = min_of(psi) - range.hi;
    double high = max_of(psi) - range.lo;
    for (int widen = 0; !inside(low); ++widen) {
        if (widen == 60) throw InvariantError("level set contains no downward shift of the profile");
        low -= (high - low);
    }
    for (int widen = 0; inside(high); ++widen) {
        if (widen == 60) throw InvariantError("level set contains every upward shift of the profile");
        high += (high - low);
    }
    const double bracket_low = low;
    const double bracket_high = high;
    while (high - low > tol) {
        const double mid = 0.5 * (low + high);
        (inside(mid) ? low : high) = mid;
    }
    const double value = 0.5 * (low + high);
    // Upward closure means membership must be monotone in alpha.
    for (int k = 1; k < 8; ++k) {
        const double below = bracket_low + (value - tol - bracket_low) * k / 8.0;
        const double above = value + tol + (bracket_high - value - tol) * k / 8.0;
        if (below < value - tol && !inside(below)) throw InvariantError("level set is not upward closed");
        if (above > value + tol && inside(above)) throw InvariantError("level set is not upward closed");
    }
    return value;
}

AnchorFamily::AnchorFamily(std::vector<Vector> anchors, std::vector<double> levels, bool concave)
    : anchors_(std::move(anchors)), levels_(std::move(levels)), concave_(concave) {
    if (anchors_.empty()) throw InputError("anchor family needs at least one anchor");
    if (anchors_.size() != levels_.size()) throw InputError("one level per anchor");
}

double AnchorFamily::member(std::size_t k, std::span<const double> x) const {
    const Vector& a = anchors_.at(k);
    if (x.size() != a.size()) throw InputError("dimension mismatch");
    double v = concave_ ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < x.size(); ++s) v = concave_ ? std::min(v, x[s] - a[s]) : std::max(v, x[s] - a[s]);
    return v + levels_[k];
}

double AnchorFamily::operator()(std::span<const double> x) const {
    double v = member(0, x);
    for (std::size_t k = 1; k < size(); ++k) v = concave_ ? std::max(v, member(k, x)) : std::min(v, member(k, x));
    return v;
}

PreferenceFunctional AnchorFamily::member_functional(std::size_t k) const {
    const Flag yes = Flag::asserted;
    const Flag unk = Flag::unknown;
    const AnchorFamily self = *this;
    Flags flags{yes, yes, unk, concave_ ? yes : unk, concave_ ? unk : yes, unk};
    return make_custom(
        anchors_.at(k).size(), [self, k](std::span<const double> x) { return self.member(k, x); },
        concave_ ? "anchor_min" : "anchor_max", flags);
}

namespace {

AnchorFamily decompose(const PreferenceFunctional& I, std::span<const Vector> anchors, bool concave) {
    if (!I.is_niveloid()) throw CapabilityError("decomposition needs an asserted niveloid: " + I.describe());
    std::vector<Vector> a;
    std::vector<double> levels;
    for (const auto& psi : anchors) {
        a.push_back(psi);
        levels.push_back(I(psi));
    }
    return AnchorFamily(std::move(a), std::move(levels), concave);
}

} // namespace

AnchorFamily decompose_sup_concave(const PreferenceFunctional& I, std::span<const Vector> anchors) {
    return decompose(I, anchors, true);
}

AnchorFamily decompose_inf_convex(const PreferenceFunctional& I, std::span<const Vector> anchors) {
    return decompose(I, anchors, false);
}

std::optional<PenaltyFunction> known_conjugate(const PreferenceFunctional& I) {
    return std::visit(
        [&](const auto& r) -> std::optional<PenaltyFunction> {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, recipe::Seu>) return PenaltyFunction::indicator(CredalSet::singleton(r.p));
            else if constexpr (std::is_same_v<R, recipe::Maxmin>) return PenaltyFunction::indicator(r.set);
            else if constexpr (std::is_same_v<R, recipe::Variational>) return r.penalty;
            else if constexpr (std::is_same_v<R, recipe::AlphaMeu>) {
                if (r.alpha == 1.0) return PenaltyFunction::indicator(r.averse);
                return std::nullopt;
            } else if constexpr (std::is_same_v<R, recipe::Choquet>) {
                if (r.capacity.states() > 6 || !capacity_is_convex(r.capacity)) return std::nullopt;
                return PenaltyFunction::indicator(*capacity_core(r.capacity));
            } else if constexpr (std::is_same_v<R, recipe::IbSeeking>) {
                if (r.family.members.size() == 1) return PenaltyFunction::indicator(r.family.members.front());
                return std::nullopt;
            } else if constexpr (std::is_same_v<R, recipe::LeaderSeeking>) {
                if (r.family.members.size() == 1) return r.family.members.front();
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        I.recipe());
}

ConjugateResult conjugate_penalty(const PreferenceFunctional& I, Range range, std::span<const double> p,
                                  const ConjugateSearch& search) {
    if (p.size() != I.dimension()) throw InputError("dimension mismatch");
    ConjugateResult out;
    out.envelope = I.flags().concave != Flag::asserted;
    if (auto c = known_conjugate(I)) {
        out.value = evaluate_penalty(*c, p);
        out.exact = true;
        out.penalty = std::move(c);
        return out;
    }
    auto objective = [&](std::span<const double> phi) { return I(phi) - dot(phi, p); };
    const PhiSampler sampler(I.dimension(), range);
    Vector best;
    double best_value = -std::numeric_limits<double>::infinity();
    const std::uint64_t budget = sampler.vertex_count() + search.samples;
    for (std::uint64_t i = 0; i < budget; ++i) {
        Rng rng = Rng::for_trial(search.seed, i);
        Vector phi = sampler(rng, i);
        const double v = objective(phi);
        ++out.evaluations;
        if (v > best_value) {
            best_value = v;
            best = std::move(phi);
        }
    }
    best_value = pattern_ascent(objective, best, range, search.refinement_rounds, out.evaluations);
    out.value = ExtendedReal(best_value);
    out.maximizer = best;
    return out;
}

FenchelResult fenchel_gap(const PenaltyFunction& b, const PenaltyFunction& c) {
    if (b.dimension() != c.dimension()) throw InputError("dimension mismatch");
    const auto* eb = std::get_if<PenaltyFunction::Entropic>(&b.kind());
    const auto* ec = std::get_if<PenaltyFunction::Entropic>(&c.kind());
    if (eb && ec) {
        const double t = eb->theta + ec->theta;
        const double wb = eb->theta / t;
        const double wc = ec->theta / t;
        Vector g(b.dimension(), 0.0);
        double z = 0.0;
        for (std::size_t s = 0; s < g.size(); ++s) {
            if (eb->reference[s] > 0.0 && ec->reference[s] > 0.0)
                g[s] = std::pow(eb->reference[s], wb) * std::pow(ec->reference[s], wc);
            z += g[s];
        }
        FenchelResult out;
        out.exact = true;
        if (z <= 0.0) {
            out.value = ExtendedReal::infinity();
            return out;
        }
        for (double& v : g) v /= z;
        out.value = ExtendedReal(-t * std::log(z) + b.offset() + c.offset());
        out.argument = ProbabilityVector(std::move(g), 1e-9);
        return out;
    }
    const ProgramSolution sol = PenaltyProgram(b.dimension()).add_term(b).add_term(c).minimize();
    return FenchelResult{sol.value, sol.argument, sol.gap, sol.exact};
}

double fenchel_sampled_bound(const PenaltyFunction& b, const PenaltyFunction& c, double radius, std::uint64_t trials,
                             std::uint64_t seed) {
    const PhiSampler sampler(b.dimension(), Range{-radius, radius});
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng = Rng::for_trial(seed, i);
        const Vector phi = sampler(rng, i);
        best = std::min(best, seeking_variational_value(phi, b).value - variational_value(phi, c).value);
    }
    return best;
}

} // namespace ambig
