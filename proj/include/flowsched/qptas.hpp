#pragma once

#include "flowsched/instance.hpp"

#include <optional>
#include <vector>

namespace flowsched {

/// Potential deadlines per job on the grid of step 1/ticks_per_unit.
struct DeadlineSets {
    std::int64_t ticks_per_unit = 1; ///< 1/δ
    std::int64_t horizon = 0;        ///< T = max r + n p_max, in time units
    /// Indexed by release-order position; sorted tick values (time = tick / ticks_per_unit).
    std::vector<std::vector<std::int64_t>> ticks;

    std::size_t interval_count(std::size_t position) const { return ticks[position].size() - 1; }
    /// Number of δ-slots in interval `l` of job `position`.
    std::int64_t slots(std::size_t position, std::size_t l) const
    {
        return ticks[position][l + 1] - ticks[position][l];
    }
};

/// T = max r_j + n * (largest finite processing time).
std::int64_t qptas_horizon(const Instance& instance);

/// Geometric refinement of {r_j, r_j + 1, T} per job, inherited along the
/// release order, then rounded down and up to the grid. Consecutive deadlines
/// d < d' with d >= r_j + 1 satisfy (d' - r_j) <= (1 + ε)(d - r_j), checked exactly.
/// Requires ticks_per_unit >= 1/ε.
DeadlineSets build_deadlines(const Instance& instance, const Rational& epsilon, std::int64_t ticks_per_unit);

struct QptasOptions {
    bool migration = true;
    /// 1/δ. Default: n^m / ε' where ε' = 1/ceil(1/ε).
    std::optional<std::int64_t> ticks_per_unit;
    /// Refuse once this many DP cells have been stored.
    std::size_t state_budget = 10'000'000;
    /// Drop guesses that cannot beat a list-scheduling upper bound.
    bool bound_pruning = true;
};

struct QptasStats {
    std::size_t cells = 0;       ///< stored (job, load vector) cells
    std::size_t transitions = 0; ///< evaluated guesses
    std::size_t residual_checks = 0;
    std::size_t subdivision_checks = 0;
    std::size_t completion_checks = 0;
};

struct QptasResult {
    Schedule schedule;
    Cost objective;    ///< Σ w_j (C_j - r_j)^p of `schedule`
    Cost charged_cost; ///< DP cost: each job charged at the end of its last used interval
    DeadlineSets deadlines;
    Rational epsilon;  ///< ε actually used (1/k form)
    Rational delta;
    QptasStats stats;
};

/// (1+ε)-approximation over δ-grid schedules on unrelated machines. Also
/// accepts single-machine instances (one machine with times p_j).
QptasResult solve_qptas(const Instance& instance, const CostModel& model, const QptasOptions& options = {});

} // namespace flowsched
