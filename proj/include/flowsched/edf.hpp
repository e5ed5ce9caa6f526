#pragma once

#include "flowsched/instance.hpp"

#include <optional>
#include <span>
#include <vector>

namespace flowsched {

/// A job with a finite deadline, as consumed by the EDF routines.
struct DeadlineJob {
    int id = 0;
    std::int64_t p = 1;
    std::int64_t r = 0;
    std::int64_t d = 0;
};

struct DeadlineMiss {
    int job = 0;
    std::int64_t deadline = 0;
    std::int64_t completion = 0;
};

struct EdfResult {
    Schedule schedule;
    bool met_all_deadlines = true;
    /// The miss with the earliest completion time (ties by id).
    std::optional<DeadlineMiss> first_violation;
};

/// Preemptive earliest-deadline-first on one machine, starting at time 0.
/// Decisions are taken at release and completion events; equal deadlines are
/// ordered by id. Slots carry the ids of `jobs`; adjacent pieces of the same
/// job are merged.
EdfResult edf_run(std::span<const DeadlineJob> jobs);

/// EDF for a single-machine instance; kInfinity deadlines are read as T.
EdfResult edf_schedule(const Instance& instance, const DeadlineAssignment& deadlines);

/// Density test: for all s <= t, the jobs with s <= r_j and d_j <= t fit into t - s.
bool density_feasible(std::span<const DeadlineJob> jobs);
bool density_feasible(const Instance& instance, const DeadlineAssignment& deadlines);

} // namespace flowsched
