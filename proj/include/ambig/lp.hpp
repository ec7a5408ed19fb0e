#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ambig::lp {

enum class Sense { less_equal, greater_equal, equal };

enum class Status { optimal, infeasible, unbounded };

using Terms = std::vector<std::pair<std::size_t, double>>;

struct Solution {
    Status status = Status::infeasible;
    double objective = 0.0;
    std::vector<double> x;

    bool optimal() const { return status == Status::optimal; }
    bool feasible() const { return status != Status::infeasible; }
};

/// Small dense linear program. Variables are nonnegative unless declared free.
///
/// Solved with a two-phase tableau simplex (Dantzig pricing, falling back to
/// Bland's rule on degenerate stalls). Intended for the desk-scale systems of
/// this library: a few dozen variables, a few hundred rows.
class Problem {
public:
    std::size_t add_variable(double cost = 0.0, bool free = false);
    /// Adds `count` variables and returns the index of the first one.
    std::size_t add_variables(std::size_t count, bool free = false);
    void set_cost(std::size_t var, double cost);

    void add_row(Terms terms, Sense sense, double rhs);

    std::size_t variable_count() const { return free_.size(); }
    std::size_t row_count() const { return rows_.size(); }

    Solution minimize() const;
    Solution maximize() const;
    /// Feasibility only (phase one).
    bool feasible() const;

private:
    struct Row {
        Terms terms;
        Sense sense;
        double rhs;
    };
    Solution solve(bool maximize, bool phase_one_only) const;

    std::vector<double> cost_;
    std::vector<bool> free_;
    std::vector<Row> rows_;
};

} // namespace ambig::lp
