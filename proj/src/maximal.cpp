#include "ambig/maximal.hpp"

#include "ambig/errors.hpp"
#include "ambig/oracle.hpp"
#include "ambig/program.hpp"

#include <cmath>

namespace ambig {

namespace {

/// Sampled check of lhs(phi) <= rhs(phi) + tol over the box.
template <class Lhs, class Rhs>
MembershipResult sampled(std::size_t n, Range range, std::uint64_t trials, std::uint64_t seed, double tol, Lhs lhs,
                         Rhs rhs) {
    const PhiSampler sampler(n, range);
    double violation = 0.0;
    const auto run = falsify(
        sampler,
        [&](const Vector& phi) {
            const double a = lhs(phi);
            const double b = rhs(phi);
            violation = a - b;
            return a <= b + tol * (1.0 + std::max(std::abs(a), std::abs(b)));
        },
        trials, seed);
    MembershipResult out;
    out.member = !run.refuted();
    out.witness = run.witness;
    out.violation = run.refuted() ? violation : 0.0;
    out.trials = run.trials;
    out.budget = trials;
    out.seed = seed;
    return out;
}

void require_ib(const PreferenceHandle& V) {
    if (!V.is_ib()) throw CapabilityError("credal-set membership needs a positively homogeneous functional");
}

void require_same_dimension(std::size_t a, std::size_t b) {
    if (a != b) throw InputError("dimension mismatch");
}

} // namespace

MembershipResult pstar_member_generic(const CredalSet& P, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol) {
    require_ib(V);
    require_same_dimension(P.dimension(), V.dimension());
    return sampled(
        V.dimension(), V.range(), trials, seed, tol, [&](const Vector& phi) { return maxmin_eu(phi, P).value; },
        [&](const Vector& phi) { return V(phi); });
}

MembershipResult qstar_member_generic(const CredalSet& Q, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol) {
    require_ib(V);
    require_same_dimension(Q.dimension(), V.dimension());
    return sampled(
        V.dimension(), V.range(), trials, seed, tol, [&](const Vector& phi) { return V(phi); },
        [&](const Vector& phi) { return maxmax_eu(phi, Q).value; });
}

MembershipResult cstar_member_generic(const PenaltyFunction& c, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol) {
    require_same_dimension(c.dimension(), V.dimension());
    return sampled(
        V.dimension(), V.range(), trials, seed, tol, [&](const Vector& phi) { return variational_value(phi, c).value; },
        [&](const Vector& phi) { return V(phi); });
}

MembershipResult bstar_member_generic(const PenaltyFunction& b, const PreferenceHandle& V, std::uint64_t trials,
                                      std::uint64_t seed, double tol) {
    require_same_dimension(b.dimension(), V.dimension());
    return sampled(
        V.dimension(), V.range(), trials, seed, tol, [&](const Vector& phi) { return V(phi); },
        [&](const Vector& phi) { return seeking_variational_value(phi, b).value; });
}

namespace {

/// Does some (x, y) with x in X, y in Y satisfy w_fixed * fixed + w_y * y = x?
bool shifted_meets(const CredalSet& X, const ProbabilityVector& fixed, double w_fixed, const CredalSet& Y, double w_y) {
    const std::size_t n = X.dimension();
    lp::Problem problem;
    const auto x = add_simplex_variables(problem, n);
    const auto y = add_simplex_variables(problem, n);
    X.constrain(problem, x);
    Y.constrain(problem, y);
    for (std::size_t s = 0; s < n; ++s)
        problem.add_row({{x[s], 1.0}, {y[s], -w_y}}, lp::Sense::equal, w_fixed * fixed[s]);
    return problem.feasible();
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
}

/// Does S meet {p : p(A_i) <= pi(A_i)} (upper) or {p : p(A_i) >= pi(A_i)} for every maximal chain?
bool chains_meet(const CredalSet& S, const Capacity& pi, lp::Sense sense) {
    const std::size_t n = S.dimension();
    require_same_dimension(n, pi.states());
    for (const Chain& chain : enumerate_maximal_chains(n)) {
        lp::Problem problem;
        const auto p = add_simplex_variables(problem, n);
        S.constrain(problem, p);
        // A_0 and A_n hold automatically.
        for (std::size_t i = 1; i < n; ++i) {
            lp::Terms row;
            for (std::size_t s = 0; s < n; ++s)
                if (chain[i] & (Event{1} << s)) row.emplace_back(p[s], 1.0);
            problem.add_row(std::move(row), sense, pi(chain[i]));
        }
        if (!problem.feasible()) return false;
    }
    return true;
}

} // namespace

bool pstar_member_alpha_meu(const CredalSet& P, const CredalSet& P1, const CredalSet& P2, double alpha) {
    check_alpha(alpha);
    require_same_dimension(P.dimension(), P1.dimension());
    require_same_dimension(P.dimension(), P2.dimension());
    for (const CredalSet hull = P1.with_vertices(); const auto& p1 : hull.vertices())
        if (!shifted_meets(P, p1, alpha, P2, 1.0 - alpha)) return false;
    return true;
}

bool qstar_member_alpha_meu(const CredalSet& Q, const CredalSet& P1, const CredalSet& P2, double alpha) {
    check_alpha(alpha);
    require_same_dimension(Q.dimension(), P1.dimension());
    require_same_dimension(Q.dimension(), P2.dimension());
    for (const CredalSet hull = P2.with_vertices(); const auto& p2 : hull.vertices())
        if (!shifted_meets(Q, p2, 1.0 - alpha, P1, alpha)) return false;
    return true;
}

bool pstar_member_ceu(const CredalSet& P, const Capacity& pi) { return chains_meet(P, pi, lp::Sense::less_equal); }

bool qstar_member_ceu(const CredalSet& Q, const Capacity& pi) { return chains_meet(Q, pi, lp::Sense::greater_equal); }

MembershipResult vp_cstar_member(const PenaltyFunction& c, const PenaltyFunction& c0, bool unbounded_range,
                                 Range range, std::uint64_t trials, std::uint64_t seed, std::size_t grid_resolution,
                                 double tol) {
    const std::size_t n = c.dimension();
    require_same_dimension(n, c0.dimension());
    if (!unbounded_range) {
        return sampled(
            n, range, trials, seed, tol, [&](const Vector& phi) { return variational_value(phi, c).value; },
            [&](const Vector& phi) { return variational_value(phi, c0).value; });
    }
    std::vector<Vector> points;
    for_each_grid_point(n, grid_resolution, [&](std::span<const double> p) { points.emplace_back(p.begin(), p.end()); });
    for (const PenaltyFunction* f : {&c, &c0})
        if (const CredalSet* dom = f->domain(); dom && (dom->has_vertices() || n <= 6))
            for (const CredalSet hull = dom->with_vertices(); const auto& v : hull.vertices()) points.push_back(v.values());

    MembershipResult out;
    out.budget = points.size();
    for (const auto& p : points) {
        ++out.trials;
        const ExtendedReal bound = evaluate_penalty(c0, p);
        if (bound.is_infinite()) continue;
        const ExtendedReal v = evaluate_penalty(c, p);
        if (v.is_infinite() || v.value() > bound.value() + tol * (1.0 + std::abs(bound.value()))) {
            out.member = false;
            out.witness = p;
            out.violation = v.is_infinite() ? std::numeric_limits<double>::infinity() : v.value() - bound.value();
            break;
        }
    }
    return out;
}

MembershipResult vp_bstar_member(const PenaltyFunction& b, const PenaltyFunction& c0, bool unbounded_range,
                                 Range range, std::uint64_t trials, std::uint64_t seed, double tol) {
    const std::size_t n = b.dimension();
    require_same_dimension(n, c0.dimension());
    if (!unbounded_range) {
        return sampled(
            n, range, trials, seed, tol, [&](const Vector& phi) { return variational_value(phi, c0).value; },
            [&](const Vector& phi) { return seeking_variational_value(phi, b).value; });
    }
    const ProgramSolution sol = PenaltyProgram(n).add_term(b).add_term(c0).minimize();
    MembershipResult out;
    out.exact = sol.exact;
    if (sol.value.is_infinite()) {
        out.member = false;
        out.violation = std::numeric_limits<double>::infinity();
        return out;
    }
    // The cutting-plane value is an upper bound within `gap` of the minimum.
    out.member = sol.value.value() - sol.gap <= tol;
    if (!out.member) {
        out.violation = sol.value.value() - sol.gap;
        if (sol.argument) out.witness = sol.argument->values();
    }
    return out;
}

CredalFamily alpha_meu_seeking_family(const CredalSet& P1, const CredalSet& P2, double alpha) {
    check_alpha(alpha);
    const CredalSet hull1 = P1.with_vertices();
    const auto& v1 = hull1.vertices();
    std::vector<CredalSet> members;
    for (const CredalSet hull = P2.with_vertices(); const auto& p2 : hull.vertices()) {
        std::vector<ProbabilityVector> pts;
        for (const auto& p1 : v1) {
            Vector x(p1.size());
            for (std::size_t s = 0; s < x.size(); ++s) x[s] = alpha * p1[s] + (1.0 - alpha) * p2[s];
            pts.emplace_back(std::move(x));
        }
        members.push_back(CredalSet::from_vertices(std::move(pts)));
    }
    return CredalFamily(std::move(members));
}

CredalFamily alpha_meu_averse_family(const CredalSet& P1, const CredalSet& P2, double alpha) {
    check_alpha(alpha);
    const CredalSet hull2 = P2.with_vertices();
    const auto& v2 = hull2.vertices();
    std::vector<CredalSet> members;
    for (const CredalSet hull = P1.with_vertices(); const auto& p1 : hull.vertices()) {
        std::vector<ProbabilityVector> pts;
        for (const auto& p2 : v2) {
            Vector x(p1.size());
            for (std::size_t s = 0; s < x.size(); ++s) x[s] = alpha * p1[s] + (1.0 - alpha) * p2[s];
            pts.emplace_back(std::move(x));
        }
        members.push_back(CredalSet::from_vertices(std::move(pts)));
    }
    return CredalFamily(std::move(members));
}

CredalFamily averse_family_at_anchors(const CredalFamily& Ps, std::span<const Vector> anchors) {
    if (anchors.empty()) throw InputError("no anchors");
    std::vector<CredalSet> members;
    for (const auto& phi : anchors) {
        std::vector<ProbabilityVector> pts;
        for (const auto& P : Ps.members) pts.push_back(maxmin_eu(phi, P).argument);
        members.push_back(CredalSet::from_vertices(std::move(pts)));
    }
    return CredalFamily(std::move(members));
}

} // namespace ambig

namespace ambig {

namespace {

/// The recipe as an alpha-MEU triple (P1, P2, alpha), when it is one.
std::optional<recipe::AlphaMeu> as_alpha_meu(const PreferenceFunctional& V) {
    if (const auto* r = std::get_if<recipe::AlphaMeu>(&V.recipe())) return *r;
    if (const auto* r = std::get_if<recipe::Maxmin>(&V.recipe())) return recipe::AlphaMeu{r->set, r->set, 1.0};
    if (const auto* r = std::get_if<recipe::Maxmax>(&V.recipe())) return recipe::AlphaMeu{r->set, r->set, 0.0};
    if (const auto* r = std::get_if<recipe::Seu>(&V.recipe())) {
        const CredalSet single = CredalSet::singleton(r->p);
        return recipe::AlphaMeu{single, single, 1.0};
    }
    return std::nullopt;
}

} // namespace

std::optional<bool> exact_pstar_member(const CredalSet& P, const PreferenceFunctional& V) {
    if (auto a = as_alpha_meu(V)) return pstar_member_alpha_meu(P, a->averse, a->seeking, a->alpha);
    if (const auto* r = std::get_if<recipe::Choquet>(&V.recipe())) return pstar_member_ceu(P, r->capacity);
    return std::nullopt;
}

std::optional<bool> exact_qstar_member(const CredalSet& Q, const PreferenceFunctional& V) {
    if (auto a = as_alpha_meu(V)) return qstar_member_alpha_meu(Q, a->averse, a->seeking, a->alpha);
    if (const auto* r = std::get_if<recipe::Choquet>(&V.recipe())) return qstar_member_ceu(Q, r->capacity);
    return std::nullopt;
}

} // namespace ambig
