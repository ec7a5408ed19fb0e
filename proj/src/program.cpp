#include "ambig/program.hpp"

#include "ambig/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ambig {

namespace {

/// Tangent plane of theta*KL(.||q) at an interior version of `at`, as a row
/// t - theta * sum_s p_s log(at_s/q_s) >= offset.
lp::Terms entropic_cut(const PenaltyFunction::Entropic& e, std::span<const double> at,
                       std::span<const std::size_t> p_vars, std::size_t t_var) {
    const auto& q = e.reference.values();
    Vector hat(at.begin(), at.end());
    double total = 0.0;
    for (std::size_t s = 0; s < hat.size(); ++s) {
        hat[s] = q[s] > 0.0 ? std::max(hat[s], 1e-9) : 0.0;
        total += hat[s];
    }
    lp::Terms row{{t_var, 1.0}};
    for (std::size_t s = 0; s < hat.size(); ++s) {
        if (q[s] <= 0.0) continue;
        row.emplace_back(p_vars[s], -e.theta * std::log(hat[s] / total / q[s]));
    }
    return row;
}

} // namespace

PenaltyProgram::PenaltyProgram(std::size_t n) : n_(n), linear_(n, 0.0) {}

PenaltyProgram& PenaltyProgram::add_linear(std::span<const double> phi) {
    if (phi.size() != n_) throw InputError("dimension mismatch in penalty program");
    for (std::size_t s = 0; s < n_; ++s) linear_[s] += phi[s];
    return *this;
}

PenaltyProgram& PenaltyProgram::add_term(const PenaltyFunction& c) { return add_envelope({c}); }

PenaltyProgram& PenaltyProgram::add_envelope(std::vector<PenaltyFunction> group) {
    if (group.empty()) throw InputError("empty penalty envelope");
    for (const auto& c : group)
        if (c.dimension() != n_) throw InputError("dimension mismatch in penalty program");
    groups_.push_back(std::move(group));
    return *this;
}

PenaltyProgram& PenaltyProgram::restrict_to(const CredalSet& set) {
    if (set.dimension() != n_) throw InputError("dimension mismatch in penalty program");
    restrictions_.push_back(set);
    return *this;
}

ExtendedReal PenaltyProgram::objective(std::span<const double> p) const {
    for (const auto& r : restrictions_)
        if (!r.contains(p)) return ExtendedReal::infinity();
    ExtendedReal total = dot(linear_, p);
    for (const auto& group : groups_) {
        ExtendedReal worst = evaluate_penalty(group.front(), p);
        for (std::size_t j = 1; j < group.size(); ++j) worst = max(worst, evaluate_penalty(group[j], p));
        total = total + worst;
    }
    return total;
}

ProgramSolution PenaltyProgram::minimize(double tol, int max_iterations) const {
    lp::Problem problem;
    const auto p = add_simplex_variables(problem, n_);
    for (std::size_t s = 0; s < n_; ++s) problem.set_cost(p[s], linear_[s]);
    for (const auto& r : restrictions_) r.constrain(problem, p);

    struct Cut {
        const PenaltyFunction::Entropic* entropic;
        double offset;
        std::size_t t;
    };
    std::vector<Cut> cuts;
    for (const auto& group : groups_) {
        const std::size_t t = problem.add_variable(1.0, true);
        for (const auto& c : group) {
            if (const CredalSet* dom = c.domain()) dom->constrain(problem, p);
            std::visit(
                [&](const auto& k) {
                    using K = std::decay_t<decltype(k)>;
                    if constexpr (std::is_same_v<K, PenaltyFunction::Indicator>) {
                        problem.add_row({{t, 1.0}}, lp::Sense::greater_equal, c.offset());
                    } else if constexpr (std::is_same_v<K, PenaltyFunction::Polyhedral>) {
                        for (const auto& piece : k.pieces) {
                            lp::Terms row{{t, 1.0}};
                            for (std::size_t s = 0; s < n_; ++s) row.emplace_back(p[s], -piece.slope[s]);
                            problem.add_row(std::move(row), lp::Sense::greater_equal, piece.intercept + c.offset());
                        }
                    } else {
                        const auto& q = k.reference.values();
                        for (std::size_t s = 0; s < n_; ++s)
                            if (q[s] <= 0.0) problem.add_row({{p[s], 1.0}}, lp::Sense::less_equal, 0.0);
                        cuts.push_back(Cut{&k, c.offset(), t});
                        problem.add_row(entropic_cut(k, q, p, t), lp::Sense::greater_equal, c.offset());
                        for (std::size_t s = 0; s < n_; ++s) {
                            if (q[s] <= 0.0) continue;
                            Vector toward(q.begin(), q.end());
                            for (auto& x : toward) x *= 0.5;
                            toward[s] += 0.5;
                            problem.add_row(entropic_cut(k, toward, p, t), lp::Sense::greater_equal, c.offset());
                        }
                    }
                },
                c.kind());
        }
    }

    ProgramSolution out;
    std::optional<Vector> best;
    ExtendedReal best_value = ExtendedReal::infinity();
    for (int iter = 1; iter <= max_iterations; ++iter) {
        const lp::Solution sol = problem.minimize();
        out.iterations = iter;
        if (sol.status == lp::Status::infeasible) {
            out.value = ExtendedReal::infinity();
            out.exact = true;
            return out;
        }
        if (!sol.optimal()) throw InvariantError("penalty program unbounded below");
        Vector pk(n_);
        for (std::size_t s = 0; s < n_; ++s) pk[s] = std::max(0.0, sol.x[p[s]]);
        double mass = 0.0;
        for (double x : pk) mass += x;
        for (double& x : pk) x /= mass;

        if (cuts.empty()) {
            out.value = sol.objective;
            out.argument = ProbabilityVector(pk, 1e-6);
            out.exact = true;
            return out;
        }
        const ExtendedReal value = objective(pk);
        if (value < best_value) {
            best_value = value;
            best = pk;
        }
        const double lower = sol.objective;
        if (best_value.is_finite()) {
            out.gap = std::max(0.0, best_value.value() - lower);
            if (out.gap <= tol * (1.0 + std::abs(best_value.value()))) break;
        }
        for (const auto& cut : cuts)
            problem.add_row(entropic_cut(*cut.entropic, pk, p, cut.t), lp::Sense::greater_equal, cut.offset);
    }
    out.value = best_value;
    if (best) out.argument = ProbabilityVector(*best, 1e-6);
    return out;
}

} // namespace ambig
