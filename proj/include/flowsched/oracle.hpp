#pragma once

#include "flowsched/instance.hpp"

namespace flowsched {

struct OracleLimits {
    std::int64_t max_total_processing = 20; ///< single machine: sum of p_j
    std::int64_t max_horizon = 32;          ///< single machine: max r_j + sum p_j
    std::size_t max_machines = 2;           ///< multi machine
    std::int64_t max_slots = 48;            ///< multi machine: grid slots up to T
    std::size_t max_states = 4'000'000;
};

struct OracleResult {
    Cost objective; ///< sum of w_j F_j^p of `schedule`
    Schedule schedule;
    std::size_t states = 0;
};

/// Exact optimum over all preemptive single-machine schedules. Searches unit
/// slots; with integer data an optimal schedule preempts only at integer times.
/// Throws ResourceLimitExceeded("instance too large for oracle") beyond `limits`.
OracleResult oracle_single(const Instance& instance, const CostModel& model, const OracleLimits& limits = {});

/// Exact optimum over schedules on the grid of step 1/grid where jobs start,
/// resume and switch only at grid points (they may finish in between).
/// Works for single- and multi-machine instances.
OracleResult oracle_multi(const Instance& instance, const CostModel& model, std::int64_t grid, bool migration,
                          const OracleLimits& limits = {});

} // namespace flowsched
