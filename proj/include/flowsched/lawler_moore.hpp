#pragma once

#include "flowsched/instance.hpp"

#include <optional>
#include <vector>

namespace flowsched {

struct LmJob {
    std::int64_t p = 1;
    std::int64_t r = 0;
    std::int64_t c = 0; ///< penalty if the job completes after the common deadline
};

/// Jobs with one common deadline. Job k is referred to by its index in `jobs`.
struct LmProblem {
    std::vector<LmJob> jobs;
    std::int64_t deadline = 0;
};

struct LmSolution {
    std::vector<bool> on_time; ///< indexed like LmProblem::jobs
    std::int64_t penalty = 0;
    /// Latest possible start of the on-time work (the deadline if none is on time).
    std::int64_t start = 0;
    /// On-time jobs packed back to back, ending at the deadline. Slot job
    /// fields are problem indices.
    Schedule schedule;

    std::vector<int> late() const;
};

/// Minimum-penalty choice of on-time jobs when nothing may run before `start`.
/// Among optimal choices the late-indicator vector (in index order) is
/// lexicographically smallest, provided n <= 60.
LmSolution lawler_moore(const LmProblem& problem, std::int64_t start);

/// Sentinel for "no start time works".
inline constexpr std::int64_t kNoStart = std::numeric_limits<std::int64_t>::min();

/// Latest start b such that the jobs forced on time fit into [max(r, b), deadline]
/// while the late penalty stays within `budget`. nullopt if even all jobs that
/// could possibly be on time leave a penalty above the budget.
std::optional<LmSolution> lm_latest_start(const LmProblem& problem, std::int64_t budget);

/// Latest starts for every budget 0..max_budget (kNoStart where infeasible).
std::vector<std::int64_t> lm_latest_start_table(const LmProblem& problem, std::int64_t max_budget);

} // namespace flowsched
