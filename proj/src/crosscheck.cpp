#include "ambig/crosscheck.hpp"

#include "ambig/errors.hpp"
#include "ambig/oracle.hpp"
#include "ambig/program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ambig {

namespace {

double brute_dot(std::span<const double> phi, const ProbabilityVector& p) {
    double v = 0.0;
    for (std::size_t s = 0; s < phi.size(); ++s) v += phi[s] * p[s];
    return v;
}

double vertex_min(std::span<const double> phi, const CredalSet& P) {
    double best = std::numeric_limits<double>::infinity();
    for (const CredalSet hull = P.with_vertices(); const auto& v : hull.vertices()) best = std::min(best, brute_dot(phi, v));
    return best;
}

double vertex_max(std::span<const double> phi, const CredalSet& P) {
    double best = -std::numeric_limits<double>::infinity();
    for (const CredalSet hull = P.with_vertices(); const auto& v : hull.vertices()) best = std::max(best, brute_dot(phi, v));
    return best;
}

/// Solves the optimality system p_s = q_s exp((mu - phi_s) / theta),
/// sum p = 1 for the multiplier by bisection and evaluates the primal
/// objective at the resulting p.
double entropic_kkt(std::span<const double> phi, const PenaltyFunction::Entropic& e) {
    const auto& q = e.reference.values();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t s = 0; s < q.size(); ++s)
        if (q[s] > 0.0) {
            lo = std::min(lo, phi[s]);
            hi = std::max(hi, phi[s]);
        }
    auto mass = [&](double mu) {
        double total = 0.0;
        for (std::size_t s = 0; s < q.size(); ++s)
            if (q[s] > 0.0) total += q[s] * std::exp((mu - phi[s]) / e.theta);
        return total;
    };
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (mass(mid) < 1.0 ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    const double total = mass(mu);
    double value = 0.0;
    for (std::size_t s = 0; s < q.size(); ++s) {
        if (q[s] <= 0.0) continue;
        const double p = q[s] * std::exp((mu - phi[s]) / e.theta) / total;
        if (p > 0.0) value += p * phi[s] + e.theta * p * std::log(p / q[s]);
    }
    return value;
}

/// min of phi . p + max_k (a_k . p + b_k) over a polytope, as the minimum over
/// the vertices of each cell where piece k is on top. With `generators` set
/// the polytope is conv(generators) and cells live in barycentric coordinates.
double piecewise_min(std::span<const double> phi, const std::vector<AffinePiece>& pieces,
                     const std::vector<LinearConstraint>& constraints, const std::vector<ProbabilityVector>* generators) {
    const std::size_t n = phi.size();
    const std::size_t dim = generators ? generators->size() : n;
    // Pull a vector on p back to the coordinates the cells live in.
    auto pull = [&](std::span<const double> a) {
        if (!generators) return Vector(a.begin(), a.end());
        Vector out(dim);
        for (std::size_t j = 0; j < dim; ++j) out[j] = brute_dot(a, (*generators)[j]);
        return out;
    };
    auto push = [&](const ProbabilityVector& x) {
        if (!generators) return x.values();
        Vector p(n, 0.0);
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t s = 0; s < n; ++s) p[s] += x[j] * (*generators)[j][s];
        return p;
    };
    double best = std::numeric_limits<double>::infinity();
    if (dim == 1) {
        const Vector p = push(ProbabilityVector({1.0}));
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& piece : pieces) top = std::max(top, dot(piece.slope, p) + piece.intercept);
        return dot(phi, p) + top;
    }
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        std::vector<LinearConstraint> cell = generators ? std::vector<LinearConstraint>{} : constraints;
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (j == k) continue;
            Vector diff(n);
            for (std::size_t s = 0; s < n; ++s) diff[s] = pieces[k].slope[s] - pieces[j].slope[s];
            cell.push_back({pull(diff), lp::Sense::greater_equal, pieces[j].intercept - pieces[k].intercept});
        }
        for (const auto& x : enumerate_vertices(dim, cell)) {
            const Vector p = push(x);
            best = std::min(best, dot(phi, p) + dot(pieces[k].slope, p) + pieces[k].intercept);
        }
    }
    return best;
}

} // namespace

double variational_oracle(std::span<const double> phi, const PenaltyFunction& c) {
    if (const auto* i = std::get_if<PenaltyFunction::Indicator>(&c.kind())) return vertex_min(phi, i->set) + c.offset();
    if (const auto* e = std::get_if<PenaltyFunction::Entropic>(&c.kind())) return entropic_kkt(phi, *e) + c.offset();
    const auto& poly = std::get<PenaltyFunction::Polyhedral>(c.kind());
    const CredalSet& D = poly.domain;
    const bool barycentric = D.has_vertices() && (!D.has_halfspaces() || D.authority() == CredalSet::Authority::vertices);
    const double v = barycentric ? piecewise_min(phi, poly.pieces, {}, &D.vertices())
                                 : piecewise_min(phi, poly.pieces, D.halfspaces(), nullptr);
    return v + c.offset();
}

EnvelopeOracle envelope_oracle(std::span<const double> phi, std::span<const PenaltyFunction> family,
                               std::size_t grid_resolution) {
    std::vector<AffinePiece> pieces;
    std::vector<LinearConstraint> constraints;
    bool exact = true;
    for (const auto& c : family) {
        const CredalSet* dom = c.domain();
        if (!dom || !dom->has_halfspaces() ||
            (dom->has_vertices() && dom->authority() == CredalSet::Authority::vertices)) {
            exact = false;
            break;
        }
        constraints.insert(constraints.end(), dom->halfspaces().begin(), dom->halfspaces().end());
        if (const auto* poly = std::get_if<PenaltyFunction::Polyhedral>(&c.kind())) {
            for (auto piece : poly->pieces) {
                piece.intercept += c.offset();
                pieces.push_back(std::move(piece));
            }
        } else {
            pieces.push_back({Vector(phi.size(), 0.0), c.offset()});
        }
    }
    if (!exact) return {grid_min_envelope(phi, family, grid_resolution).value, false};
    if (enumerate_vertices(phi.size(), constraints).empty()) return {ExtendedReal::infinity(), true};
    return {ExtendedReal(piecewise_min(phi, pieces, constraints, nullptr)), true};
}

std::optional<double> functional_oracle(const PreferenceFunctional& V, std::span<const double> phi) {
    return std::visit(
        [&](const auto& r) -> std::optional<double> {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, recipe::Seu>) return brute_dot(phi, r.p);
            else if constexpr (std::is_same_v<R, recipe::Maxmin>) return vertex_min(phi, r.set);
            else if constexpr (std::is_same_v<R, recipe::Maxmax>) return vertex_max(phi, r.set);
            else if constexpr (std::is_same_v<R, recipe::AlphaMeu>) {
                if (r.averse == r.seeking) {
                    const CredalSet hull = r.averse.with_vertices();
                    return combined_prior_game(phi, hull.vertices(), r.alpha).maxmin;
                }
                return r.alpha * vertex_min(phi, r.averse) + (1.0 - r.alpha) * vertex_max(phi, r.seeking);
            } else if constexpr (std::is_same_v<R, recipe::Choquet>) return choquet_by_thresholds(phi, r.capacity);
            else if constexpr (std::is_same_v<R, recipe::Variational>) return variational_oracle(phi, r.penalty);
            else if constexpr (std::is_same_v<R, recipe::Seeking>) return -variational_oracle(negated(phi), r.penalty);
            else if constexpr (std::is_same_v<R, recipe::IbSeeking>) {
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& P : r.family.members) best = std::max(best, vertex_min(phi, P));
                return best;
            } else if constexpr (std::is_same_v<R, recipe::IbAverse>) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& Q : r.family.members) best = std::min(best, vertex_max(phi, Q));
                return best;
            } else if constexpr (std::is_same_v<R, recipe::LeaderSeeking>) {
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& c : r.family.members) best = std::max(best, variational_oracle(phi, c));
                return best;
            } else if constexpr (std::is_same_v<R, recipe::LeaderAverse>) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& b : r.family.members) best = std::min(best, -variational_oracle(negated(phi), b));
                return best;
            } else {
                return std::nullopt;
            }
        },
        V.recipe());
}

OracleCheck compare_values(double value, std::optional<double> oracle, double tol) {
    OracleCheck out{value, oracle, 0.0, false};
    if (oracle) {
        out.discrepancy = std::abs(value - *oracle);
        out.flagged = !(out.discrepancy <= tol * (1.0 + std::abs(value)));
    }
    return out;
}

OracleCheck check_against_oracle(const PreferenceFunctional& V, std::span<const double> phi, double tol) {
    return compare_values(V(phi), functional_oracle(V, phi), tol);
}

} // namespace ambig
