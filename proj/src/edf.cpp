#include "flowsched/edf.hpp"

#include <algorithm>
#include <queue>

namespace flowsched {

namespace {

std::vector<DeadlineJob> deadline_jobs(const Instance& instance, const DeadlineAssignment& deadlines)
{
    if (instance.multi_machine())
        throw std::invalid_argument("EDF needs a single-machine instance");
    if (deadlines.d.size() != instance.size())
        throw std::invalid_argument("deadline count does not match job count");
    const DeadlineAssignment finite = deadlines.finalized(instance.horizon());
    std::vector<DeadlineJob> jobs;
    jobs.reserve(instance.size());
    for (const Job& job : instance.jobs())
        jobs.push_back({job.id, job.p, job.r, finite.d[static_cast<std::size_t>(job.id)]});
    return jobs;
}

} // namespace

EdfResult edf_run(std::span<const DeadlineJob> input)
{
    std::vector<DeadlineJob> jobs(input.begin(), input.end());
    std::stable_sort(jobs.begin(), jobs.end(), [](const DeadlineJob& a, const DeadlineJob& b) {
        return a.r != b.r ? a.r < b.r : a.id < b.id;
    });

    // (deadline, id, index into jobs); smallest first
    using Entry = std::tuple<std::int64_t, int, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    std::vector<std::int64_t> remaining(jobs.size());
    for (std::size_t k = 0; k < jobs.size(); ++k)
        remaining[k] = jobs[k].p;

    EdfResult result;
    auto& slots = result.schedule.slots;
    std::size_t next = 0;
    std::int64_t now = 0;
    while (next < jobs.size() || !ready.empty()) {
        if (ready.empty())
            now = std::max(now, jobs[next].r);
        while (next < jobs.size() && jobs[next].r <= now) {
            ready.emplace(jobs[next].d, jobs[next].id, next);
            ++next;
        }
        const auto [deadline, id, k] = ready.top();
        const std::int64_t horizon = next < jobs.size() ? jobs[next].r : std::numeric_limits<std::int64_t>::max();
        const std::int64_t run = std::min(remaining[k], horizon - now);
        if (!slots.empty() && slots.back().job == id && slots.back().end == now)
            slots.back().end += run;
        else
            slots.push_back({0, now, now + run, id});
        now += run;
        remaining[k] -= run;
        if (remaining[k] == 0) {
            ready.pop();
            if (now > deadline) {
                const DeadlineMiss miss{id, deadline, now};
                if (!result.first_violation)
                    result.first_violation = miss;
                result.met_all_deadlines = false;
            }
        }
    }
    return result;
}

EdfResult edf_schedule(const Instance& instance, const DeadlineAssignment& deadlines)
{
    const auto jobs = deadline_jobs(instance, deadlines);
    return edf_run(jobs);
}

bool density_feasible(std::span<const DeadlineJob> jobs)
{
    // The load of [s, t] only changes when s passes a release time or t passes
    // a deadline, so s ranging over releases and t over deadlines covers every
    // interval.
    for (const DeadlineJob& job : jobs)
        if (job.d - job.r < job.p)
            return false;
    for (const DeadlineJob& left : jobs) {
        const std::int64_t s = left.r;
        for (const DeadlineJob& right : jobs) {
            const std::int64_t t = right.d;
            if (t < s)
                continue;
            std::int64_t load = 0;
            for (const DeadlineJob& job : jobs)
                if (job.r >= s && job.d <= t)
                    load += job.p;
            if (load > t - s)
                return false;
        }
    }
    return true;
}

bool density_feasible(const Instance& instance, const DeadlineAssignment& deadlines)
{
    const auto jobs = deadline_jobs(instance, deadlines);
    return density_feasible(jobs);
}

} // namespace flowsched
