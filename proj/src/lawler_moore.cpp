#include "flowsched/lawler_moore.hpp"

#include <algorithm>
#include <numeric>

namespace flowsched {

namespace {

// Packs the on-time jobs back to back so that they end at the deadline; the
// job with the latest release runs last.
Schedule pack_on_time(const LmProblem& problem, const std::vector<bool>& on_time, std::int64_t start_floor)
{
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < problem.jobs.size(); ++k)
        if (on_time[k])
            order.push_back(k);
    auto due = [&](std::size_t k) { return problem.deadline - std::max(problem.jobs[k].r, start_floor); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return due(a) < due(b); });
    Schedule schedule;
    std::int64_t used = 0;
    for (std::size_t k : order) {
        const std::int64_t p = problem.jobs[k].p;
        schedule.slots.push_back({0, problem.deadline - used - p, problem.deadline - used, static_cast<int>(k)});
        used += p;
    }
    std::reverse(schedule.slots.begin(), schedule.slots.end());
    return schedule;
}

LmSolution finish(const LmProblem& problem, std::vector<bool> on_time, std::int64_t start_floor)
{
    LmSolution out;
    out.start = problem.deadline;
    for (std::size_t k = 0; k < problem.jobs.size(); ++k) {
        if (on_time[k])
            out.start -= problem.jobs[k].p;
        else
            out.penalty += problem.jobs[k].c;
    }
    out.schedule = pack_on_time(problem, on_time, start_floor);
    out.on_time = std::move(on_time);
    return out;
}

void check_problem(const LmProblem& problem)
{
    for (const LmJob& job : problem.jobs)
        if (job.p < 1 || job.r < 0 || job.c < 0)
            throw std::invalid_argument("Lawler-Moore jobs need p >= 1, r >= 0, c >= 0");
}

} // namespace

std::vector<int> LmSolution::late() const
{
    std::vector<int> out;
    for (std::size_t k = 0; k < on_time.size(); ++k)
        if (!on_time[k])
            out.push_back(static_cast<int>(k));
    return out;
}

LmSolution lawler_moore(const LmProblem& problem, std::int64_t start)
{
    check_problem(problem);
    if (start > problem.deadline)
        throw std::invalid_argument("start lies after the common deadline");
    const std::size_t n = problem.jobs.size();

    // Reversed view: everything is released at 0 and job k is due at
    // deadline - max(r_k, start). The classic weighted late-jobs DP then runs
    // over the jobs in due-date order and the total on-time processing.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto due = [&](std::size_t k) { return problem.deadline - std::max(problem.jobs[k].r, start); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return due(a) < due(b); });

    __int128 total_cost = 0;
    std::int64_t capacity = 0;
    for (const LmJob& job : problem.jobs) {
        total_cost += job.c;
        capacity += job.p;
    }
    capacity = std::min(capacity, std::max<std::int64_t>(0, problem.deadline - start));
    const bool tie_bits = n <= 60 && total_cost < (static_cast<__int128>(1) << (126 - n));
    auto value = [&](std::size_t k) -> __int128 {
        const __int128 c = problem.jobs[k].c;
        if (!tie_bits)
            return c;
        return (c << n) + (static_cast<__int128>(1) << (n - 1 - k));
    };

    const auto width = static_cast<std::size_t>(capacity) + 1;
    constexpr __int128 kUnreachable = -1;
    std::vector<__int128> best(width, kUnreachable);
    best[0] = 0;
    std::vector<std::vector<bool>> take(n, std::vector<bool>(width, false));
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t k = order[step];
        const std::int64_t p = problem.jobs[k].p;
        const std::int64_t limit = std::min(due(k), capacity);
        const __int128 gain = value(k);
        for (std::int64_t used = limit; used >= p; --used) {
            const auto from = static_cast<std::size_t>(used - p);
            if (best[from] == kUnreachable)
                continue;
            if (best[from] + gain > best[static_cast<std::size_t>(used)]) {
                best[static_cast<std::size_t>(used)] = best[from] + gain;
                take[step][static_cast<std::size_t>(used)] = true;
            }
        }
    }

    std::size_t used = 0;
    for (std::size_t x = 1; x < width; ++x)
        if (best[x] > best[used])
            used = x;
    std::vector<bool> on_time(n, false);
    for (std::size_t step = n; step-- > 0;) {
        if (take[step][used]) {
            const std::size_t k = order[step];
            on_time[k] = true;
            used -= static_cast<std::size_t>(problem.jobs[k].p);
        }
    }
    return finish(problem, std::move(on_time), start);
}

namespace {

struct LatestStartTable {
    std::vector<std::size_t> order;            // jobs by (release, index)
    std::vector<std::vector<std::int64_t>> b;  // b[step][budget], step = n is the empty suffix
    std::int64_t cap = 0;
};

LatestStartTable build_table(const LmProblem& problem, std::int64_t max_budget)
{
    const std::size_t n = problem.jobs.size();
    LatestStartTable table;
    table.order.resize(n);
    std::iota(table.order.begin(), table.order.end(), 0);
    std::stable_sort(table.order.begin(), table.order.end(), [&](std::size_t a, std::size_t b) {
        return problem.jobs[a].r < problem.jobs[b].r;
    });
    std::int64_t total_cost = 0;
    for (const LmJob& job : problem.jobs)
        total_cost += job.c;
    // Every budget of at least the total penalty behaves like the total penalty.
    table.cap = std::min(max_budget, total_cost);
    const auto width = static_cast<std::size_t>(table.cap) + 1;
    table.b.assign(n + 1, std::vector<std::int64_t>(width, kNoStart));
    std::fill(table.b[n].begin(), table.b[n].end(), problem.deadline);
    for (std::size_t step = n; step-- > 0;) {
        const LmJob& job = problem.jobs[table.order[step]];
        const auto& next = table.b[step + 1];
        auto& row = table.b[step];
        for (std::size_t budget = 0; budget < width; ++budget) {
            std::int64_t value = kNoStart;
            if (next[budget] != kNoStart && next[budget] - job.p >= job.r)
                value = next[budget] - job.p;
            if (static_cast<std::int64_t>(budget) >= job.c)
                value = std::max(value, next[budget - static_cast<std::size_t>(job.c)]);
            row[budget] = value;
        }
    }
    return table;
}

} // namespace

std::optional<LmSolution> lm_latest_start(const LmProblem& problem, std::int64_t budget)
{
    check_problem(problem);
    if (budget < 0)
        return std::nullopt;
    const LatestStartTable table = build_table(problem, budget);
    std::size_t left = static_cast<std::size_t>(table.cap);
    if (table.b[0][left] == kNoStart)
        return std::nullopt;

    // Follow the table, preferring to keep a job on time when both options
    // reach the same start.
    const std::size_t n = problem.jobs.size();
    std::vector<bool> on_time(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t k = table.order[step];
        const LmJob& job = problem.jobs[k];
        const std::int64_t target = table.b[step][left];
        const std::int64_t kept = table.b[step + 1][left];
        if (kept != kNoStart && kept - job.p >= job.r && kept - job.p == target) {
            on_time[k] = true;
        } else {
            left -= static_cast<std::size_t>(job.c);
        }
    }
    LmSolution out = finish(problem, std::move(on_time), std::numeric_limits<std::int64_t>::min());
    if (out.start != table.b[0][static_cast<std::size_t>(table.cap)])
        throw std::logic_error("latest-start traceback disagrees with its table");
    return out;
}

std::vector<std::int64_t> lm_latest_start_table(const LmProblem& problem, std::int64_t max_budget)
{
    check_problem(problem);
    if (max_budget < 0)
        return {};
    const LatestStartTable table = build_table(problem, max_budget);
    std::vector<std::int64_t> out(static_cast<std::size_t>(max_budget) + 1);
    for (std::size_t budget = 0; budget < out.size(); ++budget)
        out[budget] = table.b[0][std::min(budget, static_cast<std::size_t>(table.cap))];
    return out;
}

} // namespace flowsched
