#include "ambig/ambiguity.hpp"

#include "ambig/errors.hpp"
#include "ambig/maximal.hpp"
#include "ambig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ambig {

ComparisonResult more_averse(const PreferenceHandle& V1, const PreferenceHandle& V2, std::uint64_t trials,
                             std::uint64_t seed, double tol) {
    if (V1.range() != V2.range()) throw InputError("preferences are normalized on different utility ranges");
    if (V1.dimension() != V2.dimension()) throw InputError("dimension mismatch");
    const PhiSampler sampler(V1.dimension(), V1.range());
    double violation = 0.0;
    const auto run = falsify(
        sampler,
        [&](const Vector& phi) {
            const double a = V1(phi);
            const double b = V2(phi);
            violation = a - b;
            return a <= b + tol * (1.0 + std::max(std::abs(a), std::abs(b)));
        },
        trials, seed);
    ComparisonResult out;
    out.holds = !run.refuted();
    out.witness = run.witness;
    out.violation = run.refuted() ? violation : 0.0;
    out.trials = run.trials;
    out.budget = trials;
    out.seed = seed;
    return out;
}

const char* to_string(ProbeKind k) {
    switch (k) {
    case ProbeKind::pstar: return "pstar";
    case ProbeKind::qstar: return "qstar";
    case ProbeKind::cstar: return "cstar";
    case ProbeKind::bstar: return "bstar";
    }
    return "?";
}

namespace {

struct Verdict {
    bool member;
    bool exact;
};

Verdict membership(const Probe& probe, const PreferenceHandle& V, std::uint64_t trials, std::uint64_t seed) {
    switch (probe.kind) {
    case ProbeKind::pstar: {
        const auto& P = std::get<CredalSet>(probe.object);
        if (auto e = exact_pstar_member(P, V.functional())) return {*e, true};
        return {pstar_member_generic(P, V, trials, seed).member, false};
    }
    case ProbeKind::qstar: {
        const auto& Q = std::get<CredalSet>(probe.object);
        if (auto e = exact_qstar_member(Q, V.functional())) return {*e, true};
        return {qstar_member_generic(Q, V, trials, seed).member, false};
    }
    case ProbeKind::cstar:
        return {cstar_member_generic(std::get<PenaltyFunction>(probe.object), V, trials, seed).member, false};
    case ProbeKind::bstar:
        return {bstar_member_generic(std::get<PenaltyFunction>(probe.object), V, trials, seed).member, false};
    }
    return {false, false};
}

} // namespace

FamilyReport family_comparison(const PreferenceHandle& V1, const PreferenceHandle& V2, const std::vector<Probe>& probes,
                               std::uint64_t trials, std::uint64_t seed) {
    FamilyReport report;
    report.trials = trials;
    report.seed = seed;
    report.premise = more_averse(V1, V2, trials, seed).holds;
    for (const auto& probe : probes) {
        const Verdict a = membership(probe, V1, trials, seed);
        const Verdict b = membership(probe, V2, trials, seed);
        ProbeOutcome out{probe.kind, a.member, b.member, a.exact && b.exact, true};
        if (report.premise) {
            const bool forward = probe.kind == ProbeKind::pstar || probe.kind == ProbeKind::cstar;
            out.consistent = forward ? (!a.member || b.member) : (!b.member || a.member);
        }
        report.consistent = report.consistent && out.consistent;
        report.outcomes.push_back(out);
    }
    return report;
}

namespace {

double certificate_margin(const std::vector<Vector>& profiles, const std::vector<double>& values,
                          const std::vector<double>& weights) {
    const std::size_t n = profiles.front().size();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
        double mix = 0.0;
        for (std::size_t i = 0; i < profiles.size(); ++i) mix += weights[i] * profiles[i][s];
        top = std::max(top, mix);
    }
    double level = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i) level += weights[i] * values[i];
    return level - top;
}

InfeasibilityCertificate build_certificate(const std::vector<Vector>& profiles, const std::vector<double>& values) {
    // min tau - sum w_i v_i  s.t.  sum_i w_i phi_i[s] <= tau, w in the simplex.
    const std::size_t n = profiles.front().size();
    lp::Problem problem;
    const auto w = add_simplex_variables(problem, profiles.size());
    const std::size_t tau = problem.add_variable(1.0, true);
    for (std::size_t i = 0; i < profiles.size(); ++i) problem.set_cost(w[i], -values[i]);
    for (std::size_t s = 0; s < n; ++s) {
        lp::Terms row;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            if (profiles[i][s] != 0.0) row.emplace_back(w[i], profiles[i][s]);
        row.emplace_back(tau, -1.0);
        problem.add_row(std::move(row), lp::Sense::less_equal, 0.0);
    }
    const lp::Solution sol = problem.minimize();
    InfeasibilityCertificate cert;
    double total = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (sol.x[w[i]] > 1e-12) total += sol.x[w[i]];
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (sol.x[w[i]] <= 1e-12) continue;
        cert.profiles.push_back(profiles[i]);
        cert.values.push_back(values[i]);
        cert.weights.push_back(sol.x[w[i]] / total);
    }
    cert.margin = certificate_margin(cert.profiles, cert.values, cert.weights);
    return cert;
}

/// Coordinate ascent of V(phi) - phi . p0 over the box from a violating start.
Vector deepen(const PreferenceHandle& V, const ProbabilityVector& p0, Vector phi) {
    const Range r = V.range();
    auto gain = [&](const Vector& x) { return V(x) - dot(x, p0); };
    double best = gain(phi);
    for (double step = r.width() / 2.0; step > r.width() * 1e-6; step /= 2.0) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t s = 0; s < phi.size(); ++s)
                for (double dir : {1.0, -1.0}) {
                    Vector y = phi;
                    y[s] = std::clamp(y[s] + dir * step, r.lo, r.hi);
                    if (y[s] == phi[s]) continue;
                    const double v = gain(y);
                    if (v > best + 1e-15) {
                        best = v;
                        phi = std::move(y);
                        improved = true;
                    }
                }
        }
    }
    return phi;
}

} // namespace

AversionResult is_ambiguity_averse(const PreferenceHandle& V, std::uint64_t trials, std::uint64_t seed, double tol) {
    const std::size_t n = V.dimension();
    const Range range = V.range();
    AversionResult out;
    out.budget = trials;
    out.seed = seed;

    std::vector<Vector> profiles;
    std::vector<double> values;
    auto add = [&](const Vector& phi) {
        for (const Vector& x : {phi, shifted(negated(phi), range.lo + range.hi)}) {
            if (std::find(profiles.begin(), profiles.end(), x) != profiles.end()) continue;
            profiles.push_back(x);
            values.push_back(V(x));
        }
    };
    for (std::size_t s = 0; s < n; ++s) {
        Vector bet(n, range.lo);
        bet[s] = range.hi;
        add(bet);
    }

    const PhiSampler sampler(n, range);
    std::uint64_t trial = 0;
    for (int round = 0; round < 2000; ++round) {
        out.rounds = round + 1;
        // max t  s.t.  phi_i . p - t >= V(phi_i), t <= 0.
        lp::Problem problem;
        const auto p = add_simplex_variables(problem, n);
        const std::size_t t = problem.add_variable(1.0, true);
        problem.add_row({{t, 1.0}}, lp::Sense::less_equal, 0.0);
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            lp::Terms row;
            for (std::size_t s = 0; s < n; ++s) row.emplace_back(p[s], profiles[i][s]);
            row.emplace_back(t, -1.0);
            problem.add_row(std::move(row), lp::Sense::greater_equal, values[i]);
        }
        const lp::Solution sol = problem.maximize();
        if (sol.objective < -tol * (1.0 + range.width())) {
            out.averse = false;
            out.certificate = build_certificate(profiles, values);
            out.trials = trial;
            return out;
        }
        Vector p0v(n);
        for (std::size_t s = 0; s < n; ++s) p0v[s] = std::max(0.0, sol.x[p[s]]);
        const double sum = std::accumulate(p0v.begin(), p0v.end(), 0.0);
        for (double& x : p0v) x /= sum;
        const ProbabilityVector p0(std::move(p0v), 1e-6);

        std::optional<Vector> violating;
        for (; trial < trials && !violating; ++trial) {
            Rng rng = Rng::for_trial(seed, trial);
            Vector phi = sampler(rng, trial);
            const double v = V(phi);
            if (v > dot(phi, p0) + tol * (1.0 + std::abs(v))) violating = std::move(phi);
        }
        if (!violating) {
            out.averse = true;
            out.benchmark = p0;
            out.trials = trial;
            return out;
        }
        add(*violating);
        add(deepen(V, p0, *violating));
    }
    throw InvariantError("benchmark search did not settle within the round limit");
}

bool verify_certificate(const InfeasibilityCertificate& cert, const PreferenceHandle& V, double tol) {
    if (cert.profiles.empty() || cert.profiles.size() != cert.weights.size()) return false;
    double total = 0.0;
    for (double w : cert.weights) {
        if (w < 0.0) return false;
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) return false;
    std::vector<double> values;
    for (const auto& phi : cert.profiles) values.push_back(V(phi));
    return certificate_margin(cert.profiles, values, cert.weights) > tol;
}

} // namespace ambig
