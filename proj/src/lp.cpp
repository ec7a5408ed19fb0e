#include "ambig/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ambig::lp {

namespace {

constexpr double pivot_tol = 1e-11;
constexpr double cost_tol = 1e-10;
constexpr double feas_tol = 1e-9;

/// Dense tableau: rows 0..m-1 are constraints, row m is the objective.
/// Column n holds the right-hand side.
class Tableau {
public:
    Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), a_((m + 1) * (n + 1), 0.0), basis_(m, 0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return a_[r * (n_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, n_); }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= n_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis_[pr] = pc;
    }

    /// Runs simplex iterations on the objective row restricted to columns
    /// flagged in `allowed`. Returns false if unbounded.
    bool optimize(const std::vector<bool>& allowed) {
        std::size_t degenerate_run = 0;
        bool bland = false;
        for (std::size_t iter = 0; iter < 50000; ++iter) {
            std::size_t enter = n_;
            double best = -cost_tol;
            for (std::size_t c = 0; c < n_; ++c) {
                if (!allowed[c]) continue;
                const double d = at(m_, c);
                if (d < best) {
                    enter = c;
                    if (bland) break;
                    best = d;
                }
            }
            if (enter == n_) return true;

            std::size_t leave = m_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = at(r, enter);
                if (a <= pivot_tol) continue;
                const double q = rhs(r) / a;
                if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && leave < m_ && basis_[r] < basis_[leave])) {
                    ratio = q;
                    leave = r;
                }
            }
            if (leave == m_) return false;
            degenerate_run = (ratio <= 1e-12) ? degenerate_run + 1 : 0;
            if (degenerate_run > 30) bland = true;
            pivot(leave, enter);
        }
        return true;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> a_;
    std::vector<std::size_t> basis_;
};

} // namespace

std::size_t Problem::add_variable(double cost, bool free) {
    cost_.push_back(cost);
    free_.push_back(free);
    return cost_.size() - 1;
}

std::size_t Problem::add_variables(std::size_t count, bool free) {
    const std::size_t first = cost_.size();
    for (std::size_t i = 0; i < count; ++i) add_variable(0.0, free);
    return first;
}

void Problem::set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }

void Problem::add_row(Terms terms, Sense sense, double rhs) {
    rows_.push_back(Row{std::move(terms), sense, rhs});
}

Solution Problem::minimize() const { return solve(false, false); }
Solution Problem::maximize() const { return solve(true, false); }
bool Problem::feasible() const { return solve(false, true).feasible(); }

Solution Problem::solve(bool maximize, bool phase_one_only) const {
    const std::size_t nv = cost_.size();
    const std::size_t m = rows_.size();

    // Column layout: structural (free variables split into +/-), then one
    // slack per inequality row, then one artificial per row.
    std::vector<std::size_t> plus(nv), minus(nv, SIZE_MAX);
    std::size_t col = 0;
    for (std::size_t j = 0; j < nv; ++j) {
        plus[j] = col++;
        if (free_[j]) minus[j] = col++;
    }
    const std::size_t n_struct = col;
    std::size_t n_slack = 0;
    for (const auto& r : rows_)
        if (r.sense != Sense::equal) ++n_slack;
    const std::size_t slack0 = n_struct;
    const std::size_t art0 = slack0 + n_slack;
    const std::size_t n = art0 + m;

    Tableau t(m, n);
    std::size_t slack = slack0;
    for (std::size_t i = 0; i < m; ++i) {
        const Row& row = rows_[i];
        const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
        for (const auto& [var, coef] : row.terms) {
            t.at(i, plus[var]) += sign * coef;
            if (minus[var] != SIZE_MAX) t.at(i, minus[var]) -= sign * coef;
        }
        if (row.sense == Sense::less_equal) t.at(i, slack++) = sign;
        else if (row.sense == Sense::greater_equal) t.at(i, slack++) = -sign;
        t.at(i, art0 + i) = 1.0;
        t.rhs(i) = sign * row.rhs;
        t.basis()[i] = art0 + i;
    }

    // Phase one: minimize the sum of artificials.
    for (std::size_t c = 0; c <= n; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += t.at(i, c);
        t.at(m, c) = (c >= art0 && c < n) ? 0.0 : -s;
    }
    std::vector<bool> allowed(n, true);
    t.optimize(allowed);
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(rows_[i].rhs));
    Solution sol;
    if (-t.rhs(m) > feas_tol * scale) {
        sol.status = Status::infeasible;
        return sol;
    }

    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis()[i] < art0) continue;
        for (std::size_t c = 0; c < art0; ++c) {
            if (std::abs(t.at(i, c)) > 1e-9) {
                t.pivot(i, c);
                break;
            }
        }
    }
    for (std::size_t c = art0; c < n; ++c) allowed[c] = false;

    auto extract = [&]() {
        std::vector<double> values(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) values[t.basis()[i]] = t.rhs(i);
        std::vector<double> x(nv);
        for (std::size_t j = 0; j < nv; ++j) {
            x[j] = values[plus[j]];
            if (minus[j] != SIZE_MAX) x[j] -= values[minus[j]];
        }
        return x;
    };

    if (phase_one_only) {
        sol.status = Status::optimal;
        sol.x = extract();
        return sol;
    }

    // Phase two objective row: reduced costs of the real objective.
    const double dir = maximize ? -1.0 : 1.0;
    std::vector<double> c_full(n, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        c_full[plus[j]] = dir * cost_[j];
        if (minus[j] != SIZE_MAX) c_full[minus[j]] = -dir * cost_[j];
    }
    for (std::size_t c = 0; c <= n; ++c) t.at(m, c) = (c < n) ? c_full[c] : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = c_full[t.basis()[i]];
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c <= n; ++c) t.at(m, c) -= cb * t.at(i, c);
    }
    if (!t.optimize(allowed)) {
        sol.status = Status::unbounded;
        return sol;
    }
    sol.status = Status::optimal;
    sol.x = extract();
    double obj = 0.0;
    for (std::size_t j = 0; j < nv; ++j) obj += cost_[j] * sol.x[j];
    sol.objective = obj;
    return sol;
}

} // namespace ambig::lp
