#pragma once

#include "flowsched/dyadic_tree.hpp"
#include "flowsched/instance.hpp"
#include "flowsched/lawler_moore.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace flowsched {

/// ⌊x / unit⌋ · unit.
Cost floor_to_unit(const Cost& x, const Cost& unit);

/// 2^p + 4^p / (4^p - 3^p).
Cost poly_factor(const Exponent& p);

/// Budgets are integer multiples of unit = ε/n · LB with LB = Σ w_j p_j^p.
/// All budget arithmetic happens on the integer multiplier.
class BudgetGrid {
public:
    BudgetGrid(const Instance& instance, const Exponent& p, const Rational& epsilon);

    const Cost& lower_bound() const { return lb_; }
    const Cost& unit() const { return unit_; }
    /// ⌊x / unit⌋.
    std::int64_t units_below(const Cost& x) const;
    /// ⌊w flow^p / unit⌋.
    std::int64_t job_units(const Job& job, std::int64_t flow) const;
    /// ⌊(2^p + 4^p/(4^p - 3^p)) n^p LB / unit⌋, the largest budget on the grid.
    std::int64_t max_units() const { return max_units_; }

private:
    Exponent p_;
    Rational epsilon_;
    Cost lb_;
    Cost unit_;
    std::int64_t max_units_ = 0;
};

struct PolyOptions {
    int threads = 1;
    /// Evaluate each cell by enumerating every budget triple directly (slow;
    /// for checking the fast evaluation on tiny instances).
    bool full_enumeration = false;
    /// Refuse when (grid points) x (materialized intervals) exceeds this.
    std::int64_t max_table_entries = 60'000'000;
    /// Solve only budgets up to this many units (normally derived from an upper bound).
    std::optional<std::int64_t> budget_cap;
};

/// The budgeted DP over cells (s, t, B); B counted in grid units.
class PolyDp {
public:
    PolyDp(const Instance& instance, const CostModel& model, PolyOptions options = {});

    /// Solves all cells with budgets 0..cap units.
    void solve(std::int64_t cap);

    const DyadicTree& tree() const { return tree_; }
    const BudgetGrid& grid() const { return grid_; }
    std::int64_t cap() const { return cap_; }
    bool materialized(std::int64_t node) const;
    std::size_t materialized_count() const { return materialized_count_; }

    /// Maximal start b of cell (node, B), nullopt when infeasible.
    std::optional<std::int64_t> start(std::int64_t node, std::int64_t budget) const;

    struct CellSolution {
        std::int64_t b = 0;
        JobRange jobs;                       ///< J(s,t)
        std::vector<std::int64_t> deadlines; ///< aligned with jobs; kInfinity for INF
        std::int64_t cost_units = 0;         ///< Σ cost_j(d_j) in grid units
        std::int64_t b0 = 0;
    };
    /// Deadlines of a feasible cell, recovered through the stored tables.
    CellSolution solution(std::int64_t node, std::int64_t budget) const;

    /// Cost of job j in cell [s,t) with deadline d, in grid units.
    std::int64_t cost_units(const Job& job, std::int64_t d, std::int64_t s, std::int64_t t) const;

private:
    struct Node {
        bool materialized = false;
        std::int64_t b0 = 0;
        JobRange jobs;
        std::size_t split = 0;           ///< first recent job (r > s - len)
        std::vector<std::int64_t> best;  ///< b per budget, kNoStart if infeasible
    };

    void solve_node(std::int64_t node);
    void solve_node_full(std::int64_t node);
    LmProblem far_problem(std::int64_t node, std::int64_t deadline) const;
    std::int64_t leaf_recent_units(std::int64_t node) const;
    const std::vector<std::int64_t>& child(std::int64_t node) const;

    const Instance& instance_;
    Exponent p_;
    PolyOptions options_;
    DyadicTree tree_;
    BudgetGrid grid_;
    std::int64_t cap_ = 0;
    std::unordered_map<std::int64_t, Node> nodes_;
    std::size_t materialized_count_ = 0;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<int, std::int64_t>, std::int64_t> unit_cache_;
};

struct PolyResult {
    DeadlineAssignment deadlines; ///< INF already replaced by T
    Schedule schedule;
    Cost objective;                      ///< Σ w_j F_j^p of the EDF schedule
    std::int64_t root_budget_units = 0;  ///< smallest feasible root budget
    Cost root_budget;                    ///< the same in cost units
    std::int64_t rounded_cost_units = 0; ///< Σ cost_j(d_j) at the root
    std::size_t intervals = 0;           ///< materialized intervals
    std::int64_t grid_cap = 0;           ///< budgets solved: 0..grid_cap
    std::int64_t grid_max = 0;           ///< largest budget the full grid would have
    bool used_full_grid = false;
};

/// Cost of preemptive highest-weight-per-remaining-work scheduling, an upper bound on OPT.
Cost greedy_upper_bound(const Instance& instance, const Exponent& p);

/// Minimal feasible root budget, its deadlines, then EDF. Single machine only.
PolyResult solve_poly(const Instance& instance, const CostModel& model, PolyOptions options = {});

} // namespace flowsched
