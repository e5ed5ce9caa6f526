#pragma once

#include "flowsched/dyadic_tree.hpp"
#include "flowsched/edf.hpp"
#include "flowsched/instance.hpp"

#include <span>
#include <vector>

namespace flowsched {

struct PseudoOptions {
    int threads = 1;                      ///< cells of one tree level may be solved concurrently
    std::int64_t max_horizon = 1 << 16;   ///< refuse larger T (the table is pseudopolynomial)
};

/// cost_j(d) of the cell [s, t): 0 if d = s, else w (min(d, t) - r).
std::int64_t cell_cost(const Job& job, std::int64_t d, std::int64_t s, std::int64_t t);

/// The table of cells (s, t, b) for one single-machine instance.
class PseudoDp {
public:
    explicit PseudoDp(const Instance& instance, PseudoOptions options = {});

    /// Solves every cell, shortest intervals first.
    void solve();

    struct CellView {
        std::int64_t s = 0;
        std::int64_t t = 0;
        std::int64_t b = 0;
        std::int64_t b0 = 0;
        JobRange jobs;                       ///< J(s,t) as positions in release order
        std::span<const std::int64_t> deadlines; ///< aligned with `jobs`; kInfinity for INF
        std::int64_t cost = 0;
        std::int64_t guess = 0;              ///< the chosen split time
    };

    const DyadicTree& tree() const { return tree_; }
    CellView cell(std::int64_t node, std::int64_t b) const;
    std::size_t cell_count() const { return cell_count_; }
    /// Deadlines of the root cell (0, T, 0) by job id; kInfinity for INF.
    DeadlineAssignment root_deadlines() const;
    std::int64_t root_cost() const;

private:
    struct Cell {
        std::vector<std::int64_t> deadlines;
        std::int64_t cost = 0;
        std::int64_t guess = 0;
    };
    struct Node {
        std::int64_t b0 = 0;
        JobRange jobs;
        std::vector<Cell> cells; ///< indexed by b - b0
    };

    void solve_node(std::int64_t node);
    Cell solve_cell(std::int64_t node, std::int64_t b) const;
    const Cell& lookup(std::int64_t node, std::int64_t b) const;

    const Instance& instance_;
    PseudoOptions options_;
    DyadicTree tree_;
    std::vector<Node> nodes_;
    std::size_t cell_count_ = 0;
};

struct PseudoResult {
    DeadlineAssignment deadlines; ///< INF already replaced by T
    Schedule schedule;
    Cost objective;               ///< sum of w_j F_j
    std::int64_t root_cost = 0;
    std::size_t cells = 0;
};

/// Deadlines from the root cell, then EDF. Single-machine instances only.
PseudoResult solve_pseudo(const Instance& instance, PseudoOptions options = {});

} // namespace flowsched
