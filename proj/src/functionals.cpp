#include "ambig/functionals.hpp"

#include "ambig/errors.hpp"
#include "ambig/oracle.hpp"
#include "ambig/program.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ambig {

double seu_value(std::span<const double> phi, const ProbabilityVector& p0) { return dot(phi, p0); }

Extremum maxmin_eu(std::span<const double> phi, const CredalSet& P) { return P.minimize(phi); }

Extremum maxmax_eu(std::span<const double> phi, const CredalSet& P) { return P.maximize(phi); }

double alpha_meu(std::span<const double> phi, const CredalSet& P1, const CredalSet& P2, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
    return alpha * maxmin_eu(phi, P1).value + (1.0 - alpha) * maxmax_eu(phi, P2).value;
}

double choquet_value(std::span<const double> phi, const Capacity& pi) {
    if (phi.size() != pi.states()) throw InputError("dimension mismatch");
    const double m = min_of(phi);
    std::vector<std::size_t> order(phi.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phi[a] > phi[b]; });
    double value = m;
    Event upper = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        upper |= Event{1} << order[i];
        const double level = phi[order[i]] - m;
        // Only close a layer where the next value is strictly lower.
        if (i + 1 < order.size() && phi[order[i + 1]] == phi[order[i]]) continue;
        const double next = i + 1 < order.size() ? phi[order[i + 1]] - m : 0.0;
        value += (level - next) * pi(upper);
    }
    return value;
}

Extremum variational_value(std::span<const double> phi, const PenaltyFunction& c) {
    if (phi.size() != c.dimension()) throw InputError("dimension mismatch");
    if (const auto* e = std::get_if<PenaltyFunction::Entropic>(&c.kind())) {
        const auto& q = e->reference;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < phi.size(); ++s)
            if (q[s] > 0.0) m = std::min(m, phi[s]);
        Vector w(phi.size(), 0.0);
        for (std::size_t s = 0; s < phi.size(); ++s)
            if (q[s] > 0.0) w[s] = q[s] * std::exp(-(phi[s] - m) / e->theta);
        const double z = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& v : w) v /= z;
        return Extremum{m - e->theta * std::log(z) + c.offset(), ProbabilityVector(std::move(w), 1e-9), std::nullopt};
    }
    if (const auto* i = std::get_if<PenaltyFunction::Indicator>(&c.kind())) {
        Extremum e = i->set.minimize(phi);
        e.value += c.offset();
        return e;
    }
    const ProgramSolution sol = PenaltyProgram(phi.size()).add_linear(phi).add_term(c).minimize();
    if (sol.value.is_infinite() || !sol.argument) throw InputError("penalty is +inf everywhere");
    return Extremum{sol.value.value(), *sol.argument, std::nullopt};
}

Extremum seeking_variational_value(std::span<const double> phi, const PenaltyFunction& b) {
    Extremum e = variational_value(negated(phi), b);
    e.value = -e.value;
    return e;
}

// ---------------------------------------------------------------------------

const char* to_string(Flag f) {
    switch (f) {
    case Flag::asserted: return "asserted";
    case Flag::refuted: return "refuted";
    default: return "unknown";
    }
}

std::string describe(const Recipe& r) {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, recipe::Seu>) os << "seu";
            else if constexpr (std::is_same_v<K, recipe::Maxmin>) os << "maxmin";
            else if constexpr (std::is_same_v<K, recipe::Maxmax>) os << "maxmax";
            else if constexpr (std::is_same_v<K, recipe::AlphaMeu>) os << "alpha_meu(alpha=" << k.alpha << ")";
            else if constexpr (std::is_same_v<K, recipe::Choquet>) os << "choquet";
            else if constexpr (std::is_same_v<K, recipe::Variational>) os << "variational[" << k.penalty.describe() << "]";
            else if constexpr (std::is_same_v<K, recipe::Seeking>) os << "seeking[" << k.penalty.describe() << "]";
            else if constexpr (std::is_same_v<K, recipe::IbSeeking>) os << "ib_seeking(" << k.family.members.size() << ")";
            else if constexpr (std::is_same_v<K, recipe::IbAverse>) os << "ib_averse(" << k.family.members.size() << ")";
            else if constexpr (std::is_same_v<K, recipe::LeaderSeeking>)
                os << "leader_seeking(" << k.family.members.size() << ")";
            else if constexpr (std::is_same_v<K, recipe::LeaderAverse>)
                os << "leader_averse(" << k.family.members.size() << ")";
            else os << "custom:" << k.name;
        },
        r);
    return os.str();
}

PreferenceFunctional::PreferenceFunctional(std::size_t n, Evaluator evaluator, Flags flags, Recipe recipe)
    : n_(n), evaluator_(std::move(evaluator)), flags_(flags), recipe_(std::move(recipe)) {
    if (n < 1) throw InputError("functional needs at least one state");
    if (!evaluator_) throw InputError("functional needs an evaluator");
}

double PreferenceFunctional::operator()(std::span<const double> phi) const {
    if (phi.size() != n_) throw InputError("dimension mismatch");
    return evaluator_(phi);
}

PreferenceFunctional PreferenceFunctional::with_flags(Flags flags) const {
    PreferenceFunctional copy = *this;
    copy.flags_ = flags;
    return copy;
}

namespace {

constexpr Flag yes = Flag::asserted;
constexpr Flag unk = Flag::unknown;

Flag grounded_flag(const PenaltyFunction& c) {
    return is_grounded(PenaltyFamily({c})).grounded ? Flag::asserted : Flag::refuted;
}

} // namespace

PreferenceFunctional make_seu(ProbabilityVector p) {
    const std::size_t n = p.size();
    auto eval = [p](std::span<const double> phi) { return seu_value(phi, p); };
    return {n, eval, Flags{yes, yes, yes, yes, yes, yes}, recipe::Seu{std::move(p)}};
}

PreferenceFunctional make_maxmin(CredalSet P) {
    const std::size_t n = P.dimension();
    auto eval = [P](std::span<const double> phi) { return maxmin_eu(phi, P).value; };
    return {n, eval, Flags{yes, yes, yes, yes, unk, yes}, recipe::Maxmin{std::move(P)}};
}

PreferenceFunctional make_maxmax(CredalSet P) {
    const std::size_t n = P.dimension();
    auto eval = [P](std::span<const double> phi) { return maxmax_eu(phi, P).value; };
    return {n, eval, Flags{yes, yes, yes, unk, yes, yes}, recipe::Maxmax{std::move(P)}};
}

PreferenceFunctional make_alpha_meu(CredalSet averse, CredalSet seeking, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
    if (averse.dimension() != seeking.dimension()) throw InputError("dimension mismatch");
    const std::size_t n = averse.dimension();
    auto eval = [averse, seeking, alpha](std::span<const double> phi) { return alpha_meu(phi, averse, seeking, alpha); };
    Flags flags{yes, yes, yes, alpha == 1.0 ? yes : unk, alpha == 0.0 ? yes : unk, yes};
    return {n, eval, flags, recipe::AlphaMeu{std::move(averse), std::move(seeking), alpha}};
}

PreferenceFunctional make_choquet(Capacity pi) {
    const std::size_t n = pi.states();
    Flags flags{yes, yes, yes, unk, unk, yes};
    if (n <= 12) {
        // A Choquet integral is concave exactly when its capacity is convex.
        flags.concave = capacity_is_convex(pi) ? Flag::asserted : Flag::refuted;
    }
    auto eval = [pi](std::span<const double> phi) { return choquet_value(phi, pi); };
    return {n, eval, flags, recipe::Choquet{std::move(pi)}};
}

PreferenceFunctional make_variational(PenaltyFunction c) {
    const std::size_t n = c.dimension();
    const bool indicator = std::holds_alternative<PenaltyFunction::Indicator>(c.kind());
    Flags flags{yes, yes, indicator && c.offset() == 0.0 ? yes : unk, yes, unk, grounded_flag(c)};
    auto eval = [c](std::span<const double> phi) { return variational_value(phi, c).value; };
    return {n, eval, flags, recipe::Variational{std::move(c)}};
}

PreferenceFunctional make_seeking(PenaltyFunction b) {
    const std::size_t n = b.dimension();
    const bool indicator = std::holds_alternative<PenaltyFunction::Indicator>(b.kind());
    Flags flags{yes, yes, indicator && b.offset() == 0.0 ? yes : unk, unk, yes, grounded_flag(b)};
    auto eval = [b](std::span<const double> phi) { return seeking_variational_value(phi, b).value; };
    return {n, eval, flags, recipe::Seeking{std::move(b)}};
}

PreferenceFunctional make_custom(std::size_t n, PreferenceFunctional::Evaluator evaluator, std::string name,
                                 Flags flags) {
    return {n, std::move(evaluator), flags, recipe::Custom{std::move(name)}};
}

PreferenceHandle::PreferenceHandle(PreferenceFunctional functional, Range range)
    : functional_(std::move(functional)), range_(range) {
    if (!(range_.lo < 0.0 && 0.0 < range_.hi)) throw InputError("utility range must contain 0 in its interior");
    if (!functional_.is_normalized_niveloid())
        throw CapabilityError("functional is not an asserted normalized niveloid: " + functional_.describe());
}

// ---------------------------------------------------------------------------

const char* to_string(Property p) {
    switch (p) {
    case Property::monotone: return "monotone";
    case Property::translation_invariant: return "translation_invariant";
    case Property::positively_homogeneous: return "positively_homogeneous";
    case Property::concave: return "concave";
    case Property::convex: return "convex";
    case Property::normalized: return "normalized";
    }
    return "?";
}

const PropertyWitness* NiveloidReport::witness(Property p) const {
    for (const auto& w : witnesses)
        if (w.property == p) return &w;
    return nullptr;
}

NiveloidReport check_niveloid(const PreferenceFunctional& V, Range range, std::uint64_t trials, std::uint64_t seed,
                              double tol) {
    const std::size_t n = V.dimension();
    const PhiSampler sampler(n, range);
    NiveloidReport report;
    report.trials = trials;
    report.seed = seed;
    bool found[6] = {};

    auto record = [&](Property p, const Vector& a, const Vector& b, double violation, std::uint64_t trial) {
        auto& hit = found[static_cast<int>(p)];
        if (hit) return;
        hit = true;
        report.witnesses.push_back({p, a, b, violation, trial});
    };
    auto tolerance = [&](double a, double b) { return tol * (1.0 + std::max(std::abs(a), std::abs(b))); };

    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng = Rng::for_trial(seed, i);
        const Vector phi = sampler(rng, i);
        const Vector psi = sampler(rng, sampler.vertex_count() + i);
        const double v_phi = V(phi);

        if (!found[static_cast<int>(Property::normalized)]) {
            const double k = i == 0 ? 0.0 : i == 1 ? range.lo : i == 2 ? range.hi : rng.uniform(range.lo, range.hi);
            const Vector constant(n, k);
            const double v = V(constant);
            if (std::abs(v - k) > tolerance(v, k)) record(Property::normalized, constant, {}, std::abs(v - k), i);
        }
        if (!found[static_cast<int>(Property::monotone)]) {
            Vector up = phi;
            for (std::size_t s = 0; s < n; ++s)
                if (rng.coin()) up[s] += rng.uniform() * (range.hi - up[s]);
            const double v = V(up);
            if (v < v_phi - tolerance(v, v_phi)) record(Property::monotone, phi, up, v_phi - v, i);
        }
        if (!found[static_cast<int>(Property::translation_invariant)]) {
            const double k = rng.uniform(range.lo - min_of(phi), range.hi - max_of(phi));
            const Vector moved = shifted(phi, k);
            const double v = V(moved);
            if (std::abs(v - v_phi - k) > tolerance(v, v_phi))
                record(Property::translation_invariant, phi, moved, std::abs(v - v_phi - k), i);
        }
        if (!found[static_cast<int>(Property::positively_homogeneous)]) {
            const double lambda = rng.uniform();
            const Vector scaled_phi = scaled(phi, lambda);
            const double v = V(scaled_phi);
            if (std::abs(v - lambda * v_phi) > tolerance(v, v_phi))
                record(Property::positively_homogeneous, phi, scaled_phi, std::abs(v - lambda * v_phi), i);
        }
        if (!found[static_cast<int>(Property::concave)] || !found[static_cast<int>(Property::convex)]) {
            Vector mid(n);
            for (std::size_t s = 0; s < n; ++s) mid[s] = 0.5 * (phi[s] + psi[s]);
            const double v_psi = V(psi);
            const double v_mid = V(mid);
            const double chord = 0.5 * (v_phi + v_psi);
            const double t = tolerance(v_mid, chord);
            if (v_mid < chord - t) record(Property::concave, phi, psi, chord - v_mid, i);
            if (v_mid > chord + t) record(Property::convex, phi, psi, v_mid - chord, i);
        }
    }

    auto flag = [&](Property p) { return found[static_cast<int>(p)] ? Flag::refuted : Flag::asserted; };
    report.flags = Flags{flag(Property::monotone),
                         flag(Property::translation_invariant),
                         flag(Property::positively_homogeneous),
                         flag(Property::concave),
                         flag(Property::convex),
                         flag(Property::normalized)};
    return report;
}

} // namespace ambig
