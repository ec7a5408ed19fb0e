#include "ambig/credal.hpp"

#include "ambig/errors.hpp"
#include "ambig/program.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ambig {

// ---------------------------------------------------------------------------
// ProbabilityVector

ProbabilityVector::ProbabilityVector(Vector p, double tol) : p_(std::move(p)) {
    if (p_.empty()) throw InputError("empty probability vector");
    double sum = 0.0;
    for (double x : p_) {
        if (!(x >= -tol)) throw InputError("probability vector has a negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol) throw InputError("probability vector does not sum to 1");
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) { return ProbabilityVector(Vector(n, 1.0 / n)); }

ProbabilityVector ProbabilityVector::unit(std::size_t n, std::size_t s) {
    Vector p(n, 0.0);
    p.at(s) = 1.0;
    return ProbabilityVector(std::move(p));
}

double ProbabilityVector::of(Event a) const {
    double v = 0.0;
    for (std::size_t s = 0; s < p_.size(); ++s)
        if (a & (Event{1} << s)) v += p_[s];
    return v;
}

bool LinearConstraint::satisfied_by(std::span<const double> p, double tol) const {
    const double lhs = dot(coefficients, p);
    switch (sense) {
    case lp::Sense::less_equal: return lhs <= bound + tol;
    case lp::Sense::greater_equal: return lhs >= bound - tol;
    case lp::Sense::equal: return std::abs(lhs - bound) <= tol;
    }
    return false;
}

// ---------------------------------------------------------------------------
// LP helpers

std::vector<std::size_t> add_simplex_variables(lp::Problem& problem, std::size_t n) {
    const std::size_t first = problem.add_variables(n);
    std::vector<std::size_t> vars(n);
    std::iota(vars.begin(), vars.end(), first);
    lp::Terms sum;
    for (auto v : vars) sum.emplace_back(v, 1.0);
    problem.add_row(std::move(sum), lp::Sense::equal, 1.0);
    return vars;
}

namespace {

void add_constraint_row(lp::Problem& problem, std::span<const std::size_t> p, const LinearConstraint& c) {
    lp::Terms row;
    for (std::size_t s = 0; s < p.size(); ++s)
        if (c.coefficients[s] != 0.0) row.emplace_back(p[s], c.coefficients[s]);
    problem.add_row(std::move(row), c.sense, c.bound);
}

bool in_simplex(std::span<const double> p, double tol) {
    double sum = 0.0;
    for (double x : p) {
        if (x < -tol) return false;
        sum += x;
    }
    return std::abs(sum - 1.0) <= tol;
}

/// Distance (l1) from p to the hull of the vertex list, by LP.
double hull_distance(std::span<const ProbabilityVector> vertices, std::span<const double> p) {
    const std::size_t n = p.size();
    lp::Problem problem;
    const std::size_t lam = problem.add_variables(vertices.size());
    const std::size_t ep = problem.add_variables(n);
    const std::size_t em = problem.add_variables(n);
    lp::Terms sum;
    for (std::size_t j = 0; j < vertices.size(); ++j) sum.emplace_back(lam + j, 1.0);
    problem.add_row(std::move(sum), lp::Sense::equal, 1.0);
    for (std::size_t s = 0; s < n; ++s) {
        lp::Terms row;
        for (std::size_t j = 0; j < vertices.size(); ++j)
            if (vertices[j][s] != 0.0) row.emplace_back(lam + j, vertices[j][s]);
        row.emplace_back(ep + s, 1.0);
        row.emplace_back(em + s, -1.0);
        problem.add_row(std::move(row), lp::Sense::equal, p[s]);
        problem.set_cost(ep + s, 1.0);
        problem.set_cost(em + s, 1.0);
    }
    return problem.minimize().objective;
}

Extremum extremum_over_vertices(std::span<const ProbabilityVector> vertices, std::span<const double> phi,
                                bool maximize) {
    std::size_t best = 0;
    double best_value = dot(vertices[0], phi);
    for (std::size_t j = 1; j < vertices.size(); ++j) {
        const double v = dot(vertices[j], phi);
        const double margin = 1e-12 * (1.0 + std::abs(best_value));
        if (maximize ? v > best_value + margin : v < best_value - margin) {
            best = j;
            best_value = v;
        }
    }
    return Extremum{best_value, vertices[best], best};
}

ProbabilityVector clean_point(const std::vector<double>& x, std::span<const std::size_t> vars) {
    Vector p(vars.size());
    double sum = 0.0;
    for (std::size_t s = 0; s < vars.size(); ++s) {
        p[s] = std::max(0.0, x[vars[s]]);
        sum += p[s];
    }
    for (double& v : p) v /= sum;
    return ProbabilityVector(std::move(p), 1e-6);
}

} // namespace

// ---------------------------------------------------------------------------
// CredalSet

CredalSet CredalSet::from_vertices(std::vector<ProbabilityVector> vertices) {
    if (vertices.empty()) throw EmptySetError("credal set needs at least one vertex");
    CredalSet set;
    set.n_ = vertices.front().size();
    for (const auto& v : vertices)
        if (v.size() != set.n_) throw InputError("vertices of different dimensions");
    set.vertices_ = std::move(vertices);
    set.authority_ = Authority::vertices;
    return set;
}

CredalSet CredalSet::from_halfspaces(std::size_t n, std::vector<LinearConstraint> constraints) {
    if (n < 2) throw InputError("credal set needs at least two states");
    for (const auto& c : constraints)
        if (c.coefficients.size() != n) throw InputError("constraint dimension mismatch");
    CredalSet set;
    set.n_ = n;
    set.constraints_ = std::move(constraints);
    set.has_halfspaces_ = true;
    set.authority_ = Authority::halfspaces;
    lp::Problem problem;
    const auto p = add_simplex_variables(problem, n);
    set.constrain(problem, p);
    if (!problem.feasible()) throw EmptySetError("constraint system has no point in the simplex");
    return set;
}

CredalSet CredalSet::from_both(std::vector<ProbabilityVector> vertices, std::vector<LinearConstraint> constraints,
                               Authority authority) {
    CredalSet set = from_vertices(std::move(vertices));
    for (const auto& c : constraints)
        if (c.coefficients.size() != set.n_) throw InputError("constraint dimension mismatch");
    set.constraints_ = std::move(constraints);
    set.has_halfspaces_ = true;
    set.authority_ = authority;
    return set;
}

CredalSet CredalSet::simplex(std::size_t n) {
    std::vector<ProbabilityVector> units;
    for (std::size_t s = 0; s < n; ++s) units.push_back(ProbabilityVector::unit(n, s));
    return from_both(std::move(units), {}, Authority::halfspaces);
}

CredalSet CredalSet::singleton(const ProbabilityVector& p) { return from_vertices({p}); }

const std::vector<ProbabilityVector>& CredalSet::vertices() const {
    if (vertices_.empty()) throw CapabilityError("credal set has no vertex list; call with_vertices()");
    return vertices_;
}

CredalSet CredalSet::with_vertices() const {
    if (has_vertices()) return *this;
    CredalSet copy = *this;
    copy.vertices_ = enumerate_vertices(n_, constraints_);
    if (copy.vertices_.empty()) throw EmptySetError("vertex enumeration found no vertex");
    return copy;
}

bool CredalSet::contains(std::span<const double> p, double tol) const {
    if (p.size() != n_) throw InputError("dimension mismatch");
    if (!in_simplex(p, tol)) return false;
    if (authority_ == Authority::halfspaces || !has_vertices()) {
        return std::all_of(constraints_.begin(), constraints_.end(),
                           [&](const LinearConstraint& c) { return c.satisfied_by(p, tol); });
    }
    if (vertices_.size() == 1) {
        for (std::size_t s = 0; s < n_; ++s)
            if (std::abs(vertices_[0][s] - p[s]) > tol) return false;
        return true;
    }
    return hull_distance(vertices_, p) <= tol * static_cast<double>(n_);
}

bool CredalSet::is_singleton(double tol) const {
    const CredalSet v = with_vertices();
    for (const auto& x : v.vertices_)
        for (std::size_t s = 0; s < n_; ++s)
            if (std::abs(x[s] - v.vertices_[0][s]) > tol) return false;
    return true;
}

Extremum CredalSet::minimize(std::span<const double> phi) const {
    if (phi.size() != n_) throw InputError("dimension mismatch");
    if (has_vertices()) return extremum_over_vertices(vertices_, phi, false);
    lp::Problem problem;
    const auto p = add_simplex_variables(problem, n_);
    constrain(problem, p);
    for (std::size_t s = 0; s < n_; ++s) problem.set_cost(p[s], phi[s]);
    const lp::Solution sol = problem.minimize();
    if (sol.status == lp::Status::infeasible) throw EmptySetError("credal set is empty");
    return Extremum{sol.objective, clean_point(sol.x, p), std::nullopt};
}

Extremum CredalSet::maximize(std::span<const double> phi) const {
    Extremum e = minimize(negated(phi));
    e.value = -e.value;
    return e;
}

void CredalSet::constrain(lp::Problem& problem, std::span<const std::size_t> p) const {
    if (p.size() != n_) throw InputError("dimension mismatch");
    if (authority_ == Authority::halfspaces || !has_vertices()) {
        for (const auto& c : constraints_) add_constraint_row(problem, p, c);
        return;
    }
    const std::size_t lam = problem.add_variables(vertices_.size());
    lp::Terms sum;
    for (std::size_t j = 0; j < vertices_.size(); ++j) sum.emplace_back(lam + j, 1.0);
    problem.add_row(std::move(sum), lp::Sense::equal, 1.0);
    for (std::size_t s = 0; s < n_; ++s) {
        lp::Terms row{{p[s], 1.0}};
        for (std::size_t j = 0; j < vertices_.size(); ++j)
            if (vertices_[j][s] != 0.0) row.emplace_back(lam + j, -vertices_[j][s]);
        problem.add_row(std::move(row), lp::Sense::equal, 0.0);
    }
}

bool CredalSet::representations_agree(double tol) const {
    if (!has_vertices() || !has_halfspaces()) return true;
    for (const auto& v : vertices_)
        for (const auto& c : constraints_)
            if (!c.satisfied_by(v, tol)) return false;
    for (const auto& v : enumerate_vertices(n_, constraints_))
        if (hull_distance(vertices_, v) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Vertex enumeration: every choice of active inequalities that, together with
// the equalities, pins down a unique point.

std::vector<ProbabilityVector> enumerate_vertices(std::size_t n, std::span<const LinearConstraint> constraints) {
    struct Row {
        Vector a;
        double b;
    };
    std::vector<Row> equalities{{Vector(n, 1.0), 1.0}};
    std::vector<Row> inequalities; // a . p <= b
    for (const auto& c : constraints) {
        switch (c.sense) {
        case lp::Sense::equal: equalities.push_back({c.coefficients, c.bound}); break;
        case lp::Sense::less_equal: inequalities.push_back({c.coefficients, c.bound}); break;
        case lp::Sense::greater_equal: inequalities.push_back({negated(c.coefficients), -c.bound}); break;
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        Vector a(n, 0.0);
        a[s] = -1.0;
        inequalities.push_back({a, 0.0});
    }

    // Keep a maximal independent subset of the equalities.
    std::vector<Row> basis;
    for (const auto& e : equalities) {
        Eigen::MatrixXd m(basis.size() + 1, n);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t s = 0; s < n; ++s) m(i, s) = basis[i].a[s];
        for (std::size_t s = 0; s < n; ++s) m(basis.size(), s) = e.a[s];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        lu.setThreshold(1e-10);
        if (static_cast<std::size_t>(lu.rank()) == basis.size() + 1) basis.push_back(e);
    }
    const std::size_t k = n - basis.size();
    std::vector<ProbabilityVector> found;
    auto feasible = [&](const Eigen::VectorXd& x) {
        Vector p(x.data(), x.data() + n);
        for (const auto& e : equalities)
            if (std::abs(dot(e.a, p) - e.b) > 1e-8) return false;
        for (const auto& r : inequalities)
            if (dot(r.a, p) > r.b + 1e-9) return false;
        return true;
    };

    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t s = 0; s < n; ++s) m(i, s) = basis[i].a[s];
        rhs(i) = basis[i].b;
    }
    auto try_subset = [&](const std::vector<std::size_t>& chosen) {
        for (std::size_t r = 0; r < k; ++r) {
            const Row& row = inequalities[chosen[r]];
            for (std::size_t s = 0; s < n; ++s) m(basis.size() + r, s) = row.a[s];
            rhs(basis.size() + r) = row.b;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        lu.setThreshold(1e-10);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd x = lu.solve(rhs);
        if (!feasible(x)) return;
        Vector p(n);
        for (std::size_t s = 0; s < n; ++s) p[s] = std::max(0.0, x(s));
        const double sum = std::accumulate(p.begin(), p.end(), 0.0);
        for (double& v : p) v /= sum;
        found.emplace_back(std::move(p), 1e-6);
    };

    const std::size_t total = inequalities.size();
    if (k == 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        const Eigen::VectorXd x = lu.solve(rhs);
        if (feasible(x)) try_subset({});
    } else if (k <= total) {
        std::vector<std::size_t> chosen(k);
        std::iota(chosen.begin(), chosen.end(), 0);
        while (true) {
            try_subset(chosen);
            std::size_t i = k;
            while (i > 0 && chosen[i - 1] == total - k + i - 1) --i;
            if (i == 0) break;
            ++chosen[i - 1];
            for (std::size_t j = i; j < k; ++j) chosen[j] = chosen[j - 1] + 1;
        }
    }

    std::sort(found.begin(), found.end(),
              [](const ProbabilityVector& a, const ProbabilityVector& b) { return a.values() < b.values(); });
    std::vector<ProbabilityVector> unique;
    for (auto& v : found) {
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const ProbabilityVector& u) {
            for (std::size_t s = 0; s < n; ++s)
                if (std::abs(u[s] - v[s]) > 1e-9) return false;
            return true;
        });
        if (!dup) unique.push_back(std::move(v));
    }
    return unique;
}

std::optional<ProbabilityVector> common_point(std::span<const CredalSet> sets) {
    if (sets.empty()) throw InputError("no sets to intersect");
    lp::Problem problem;
    const auto p = add_simplex_variables(problem, sets.front().dimension());
    for (const auto& s : sets) s.constrain(problem, p);
    const lp::Solution sol = problem.minimize();
    if (!sol.feasible()) return std::nullopt;
    return clean_point(sol.x, p);
}

std::optional<Extremum> optimize_over_intersection(std::span<const CredalSet> sets, std::span<const double> phi,
                                                   bool maximize) {
    if (sets.empty()) throw InputError("no sets to intersect");
    if (sets.size() == 1) return maximize ? sets.front().maximize(phi) : sets.front().minimize(phi);
    lp::Problem problem;
    const auto p = add_simplex_variables(problem, sets.front().dimension());
    for (const auto& s : sets) s.constrain(problem, p);
    for (std::size_t s = 0; s < p.size(); ++s) problem.set_cost(p[s], phi[s]);
    const lp::Solution sol = maximize ? problem.maximize() : problem.minimize();
    if (!sol.optimal()) return std::nullopt;
    return Extremum{sol.objective, clean_point(sol.x, p), std::nullopt};
}

// ---------------------------------------------------------------------------
// Capacity

Capacity::Capacity(std::size_t n, Vector values) : n_(n), values_(std::move(values)) {
    if (n < 2 || n > 20) throw CapabilityError("capacities supported for 2..20 states");
    const std::size_t count = std::size_t{1} << n;
    if (values_.size() != count) throw InputError("capacity needs one value per event");
    const Event full = static_cast<Event>(count - 1);
    if (std::abs(values_[0]) > membership_tolerance) throw InputError("capacity of the empty event must be 0");
    if (std::abs(values_[full] - 1.0) > membership_tolerance) throw InputError("capacity of the sure event must be 1");
    values_[0] = 0.0;
    values_[full] = 1.0;
    for (Event a = 0; a <= full; ++a)
        for (std::size_t s = 0; s < n; ++s) {
            const Event b = a | (Event{1} << s);
            if (b != a && values_[a] > values_[b] + membership_tolerance)
                throw InputError("capacity is not monotone");
        }
}

Capacity Capacity::additive(const ProbabilityVector& p) {
    const std::size_t n = p.size();
    Vector v(std::size_t{1} << n);
    for (Event a = 0; a < v.size(); ++a) v[a] = p.of(a);
    v.back() = 1.0;
    return Capacity(n, std::move(v));
}

bool capacity_is_convex(const Capacity& pi, double tol) {
    if (pi.states() > 12) throw CapabilityError("exhaustive convexity check limited to 12 states");
    const Event count = static_cast<Event>(std::size_t{1} << pi.states());
    for (Event a = 0; a < count; ++a)
        for (Event b = a + 1; b < count; ++b)
            if (pi(a | b) + pi(a & b) < pi(a) + pi(b) - tol) return false;
    return true;
}

std::optional<CredalSet> capacity_core(const Capacity& pi) {
    const std::size_t n = pi.states();
    if (n > 6) throw CapabilityError("core vertex enumeration limited to 6 states");
    std::vector<LinearConstraint> constraints;
    const Event full = static_cast<Event>((std::size_t{1} << n) - 1);
    for (Event a = 1; a < full; ++a) {
        Vector coef(n, 0.0);
        for (std::size_t s = 0; s < n; ++s)
            if (a & (Event{1} << s)) coef[s] = 1.0;
        constraints.push_back({std::move(coef), lp::Sense::greater_equal, pi(a)});
    }
    lp::Problem problem;
    const auto p = add_simplex_variables(problem, n);
    for (const auto& c : constraints) add_constraint_row(problem, p, c);
    if (!problem.feasible()) return std::nullopt;
    auto vertices = enumerate_vertices(n, constraints);
    if (vertices.empty()) return std::nullopt;
    return CredalSet::from_both(std::move(vertices), std::move(constraints), CredalSet::Authority::halfspaces);
}

// ---------------------------------------------------------------------------
// Penalties

PenaltyFunction PenaltyFunction::indicator(CredalSet set) { return PenaltyFunction(Indicator{std::move(set)}); }

PenaltyFunction PenaltyFunction::polyhedral(std::vector<AffinePiece> pieces, CredalSet domain) {
    if (pieces.empty()) throw InputError("polyhedral penalty needs at least one piece");
    for (const auto& piece : pieces)
        if (piece.slope.size() != domain.dimension()) throw InputError("penalty piece dimension mismatch");
    return PenaltyFunction(Polyhedral{std::move(pieces), std::move(domain)});
}

PenaltyFunction PenaltyFunction::entropic(ProbabilityVector reference, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw InputError("entropic scale must be positive");
    return PenaltyFunction(Entropic{std::move(reference), theta});
}

PenaltyFunction PenaltyFunction::plus(double constant) const {
    PenaltyFunction c = *this;
    c.offset_ += constant;
    return c;
}

std::size_t PenaltyFunction::dimension() const {
    return std::visit(
        [](const auto& k) -> std::size_t {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Indicator>) return k.set.dimension();
            else if constexpr (std::is_same_v<K, Polyhedral>) return k.domain.dimension();
            else return k.reference.size();
        },
        kind_);
}

const CredalSet* PenaltyFunction::domain() const {
    if (const auto* i = std::get_if<Indicator>(&kind_)) return &i->set;
    if (const auto* p = std::get_if<Polyhedral>(&kind_)) return &p->domain;
    return nullptr;
}

std::string PenaltyFunction::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Indicator>) os << "indicator";
            else if constexpr (std::is_same_v<K, Polyhedral>) os << "polyhedral(" << k.pieces.size() << " pieces)";
            else os << "entropic(theta=" << k.theta << ")";
        },
        kind_);
    if (offset_ != 0.0) os << (offset_ > 0 ? "+" : "") << offset_;
    return os.str();
}

ExtendedReal evaluate_penalty(const PenaltyFunction& c, std::span<const double> p) {
    if (p.size() != c.dimension()) throw InputError("dimension mismatch");
    return std::visit(
        [&](const auto& k) -> ExtendedReal {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PenaltyFunction::Indicator>) {
                return k.set.contains(p) ? ExtendedReal(c.offset()) : ExtendedReal::infinity();
            } else if constexpr (std::is_same_v<K, PenaltyFunction::Polyhedral>) {
                if (!k.domain.contains(p)) return ExtendedReal::infinity();
                double v = -std::numeric_limits<double>::infinity();
                for (const auto& piece : k.pieces) v = std::max(v, dot(piece.slope, p) + piece.intercept);
                return v + c.offset();
            } else {
                double kl = 0.0;
                for (std::size_t s = 0; s < p.size(); ++s) {
                    if (p[s] <= 0.0) continue;
                    if (k.reference[s] <= 0.0) return ExtendedReal::infinity();
                    kl += p[s] * std::log(p[s] / k.reference[s]);
                }
                return k.theta * std::max(0.0, kl) + c.offset();
            }
        },
        c.kind());
}

PenaltyMinimum minimize_penalty(const PenaltyFunction& c) {
    if (const auto* e = std::get_if<PenaltyFunction::Entropic>(&c.kind())) return {c.offset(), e->reference};
    const ProgramSolution sol = PenaltyProgram(c.dimension()).add_term(c).minimize();
    if (!sol.argument) throw EmptySetError("penalty has empty effective domain");
    return {sol.value, *sol.argument};
}

PenaltyFamily::PenaltyFamily(std::vector<PenaltyFunction> m) : members(std::move(m)) {
    if (members.empty()) throw InputError("penalty family must be nonempty");
    for (const auto& c : members)
        if (c.dimension() != members.front().dimension()) throw InputError("penalty family mixes dimensions");
}

CredalFamily::CredalFamily(std::vector<CredalSet> m) : members(std::move(m)) {
    if (members.empty()) throw InputError("credal family must be nonempty");
    for (const auto& c : members)
        if (c.dimension() != members.front().dimension()) throw InputError("credal family mixes dimensions");
}

GroundednessReport is_grounded(const PenaltyFamily& family, double tol) {
    std::optional<GroundednessReport> best;
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const PenaltyMinimum m = minimize_penalty(family.members[i]);
        const double v = m.value.value();
        if (!best || v > best->sup_of_minima) best = GroundednessReport{false, v, i, m.argument};
    }
    best->grounded = std::abs(best->sup_of_minima) <= tol;
    return *best;
}

} // namespace ambig
