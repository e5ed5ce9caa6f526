#pragma once

// Exhaustive reference solvers used only by the tests.

#include "flowsched/edf.hpp"
#include "flowsched/instance.hpp"
#include "flowsched/lawler_moore.hpp"

#include <optional>
#include <vector>

namespace bf {

using flowsched::DeadlineJob;
using flowsched::LmProblem;

/// Whether some unit-slot schedule meets every deadline (memoized search).
bool deadlines_feasible(const std::vector<DeadlineJob>& jobs);

/// Makespan of any work-conserving schedule of the given (p, r) pairs.
std::int64_t work_conserving_makespan(std::vector<std::pair<std::int64_t, std::int64_t>> jobs);

/// Minimum late penalty over all on-time subsets, nothing before `start`.
std::int64_t lm_penalty(const LmProblem& problem, std::int64_t start);

/// Latest start over all subsets whose late penalty fits the budget.
std::optional<std::int64_t> lm_latest_start(const LmProblem& problem, std::int64_t budget);

/// min over priority orders of list scheduling; optimal for a single machine.
flowsched::Cost priority_optimum(const flowsched::Instance& instance, const flowsched::Exponent& p);

} // namespace bf
