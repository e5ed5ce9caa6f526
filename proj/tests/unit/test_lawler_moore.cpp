#include "brute_force.hpp"
#include "flowsched/gen.hpp"
#include "flowsched/lawler_moore.hpp"

#include <doctest.h>

using namespace flowsched;

namespace {

LmProblem random_problem(Rng& rng, int max_n, std::int64_t max_total)
{
    LmProblem problem;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n)));
    std::int64_t total = 0;
    for (int k = 0; k < n && total < max_total; ++k) {
        LmJob job;
        job.p = rng.between(1, std::min<std::int64_t>(6, max_total - total));
        job.r = rng.between(0, 12);
        job.c = rng.between(0, 9);
        total += job.p;
        problem.jobs.push_back(job);
    }
    problem.deadline = rng.between(0, 24);
    return problem;
}

// On-time jobs fit between max(r, floor) and the deadline without overlap.
void check_fragment(const LmProblem& problem, const LmSolution& sol, std::int64_t floor)
{
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    std::int64_t penalty = 0;
    for (std::size_t k = 0; k < problem.jobs.size(); ++k)
        if (!sol.on_time[k])
            penalty += problem.jobs[k].c;
    CHECK(penalty == sol.penalty);
    for (const Slot& slot : sol.schedule.slots) {
        const LmJob& job = problem.jobs[static_cast<std::size_t>(slot.job)];
        CHECK(sol.on_time[static_cast<std::size_t>(slot.job)]);
        CHECK(slot.start >= std::max(job.r, floor));
        CHECK(slot.end - slot.start == job.p);
        CHECK(slot.end <= problem.deadline);
        CHECK(slot.start >= prev);
        prev = slot.end;
    }
}

} // namespace

TEST_SUITE("lawler_moore")
{
    TEST_CASE("keeps the expensive job on time")
    {
        LmProblem problem{{{2, 0, 5}, {2, 0, 3}}, 3};
        const LmSolution sol = lawler_moore(problem, 0);
        CHECK(sol.penalty == 3);
        CHECK(sol.on_time == std::vector<bool>{true, false});
        CHECK(sol.late() == std::vector<int>{1});
        check_fragment(problem, sol, 0);
    }

    TEST_CASE("everything fits")
    {
        LmProblem problem{{{2, 0, 5}, {3, 1, 3}, {1, 0, 1}}, 10};
        CHECK(lawler_moore(problem, 2).penalty == 0);
    }

    TEST_CASE("zero room")
    {
        LmProblem problem{{{1, 4, 7}}, 4};
        CHECK(lawler_moore(problem, 0).penalty == 7);
    }

    TEST_CASE("ties prefer the lexicographically smallest late vector")
    {
        LmProblem problem{{{2, 0, 4}, {2, 0, 4}, {2, 0, 4}}, 4};
        const LmSolution sol = lawler_moore(problem, 0);
        CHECK(sol.penalty == 4);
        CHECK(sol.late() == std::vector<int>{2});
    }

    TEST_CASE("start after the deadline is rejected")
    {
        LmProblem problem{{{1, 0, 1}}, 3};
        CHECK_THROWS_AS(lawler_moore(problem, 4), std::invalid_argument);
    }

    TEST_CASE("latest start examples")
    {
        LmProblem problem{{{2, 0, 10}}, 5};
        CHECK(lm_latest_start(problem, 0)->start == 3);
        CHECK(lm_latest_start(problem, 10)->start == 5);
        CHECK(lm_latest_start(problem, 1000)->start == 5);

        LmProblem tight{{{3, 4, 2}}, 5};
        CHECK_FALSE(lm_latest_start(tight, 1));
        CHECK(lm_latest_start(tight, 2)->start == 5);
    }

    TEST_CASE("penalty matches subset enumeration")
    {
        Rng rng(17);
        for (int round = 0; round < 500; ++round) {
            const LmProblem problem = random_problem(rng, 10, 30);
            const std::int64_t start = rng.between(0, problem.deadline);
            const LmSolution sol = lawler_moore(problem, start);
            CHECK(sol.penalty == bf::lm_penalty(problem, start));
            check_fragment(problem, sol, start);
        }
    }

    TEST_CASE("latest start matches subset enumeration")
    {
        Rng rng(23);
        for (int round = 0; round < 500; ++round) {
            const LmProblem problem = random_problem(rng, 8, 30);
            const std::int64_t budget = rng.between(0, 30);
            const auto expected = bf::lm_latest_start(problem, budget);
            const auto sol = lm_latest_start(problem, budget);
            REQUIRE(expected.has_value() == sol.has_value());
            if (sol) {
                CHECK(sol->start == *expected);
                CHECK(sol->penalty <= budget);
                check_fragment(problem, *sol, sol->start);
            }
        }
    }

    TEST_CASE("latest start is monotone in the budget and the table agrees")
    {
        Rng rng(31);
        for (int round = 0; round < 200; ++round) {
            const LmProblem problem = random_problem(rng, 8, 30);
            const auto table = lm_latest_start_table(problem, 40);
            std::int64_t total = 0;
            for (const auto& job : problem.jobs)
                total += job.c;
            for (std::int64_t budget = 0; budget <= 40; ++budget) {
                const auto sol = lm_latest_start(problem, budget);
                CHECK(table[static_cast<std::size_t>(budget)] == (sol ? sol->start : kNoStart));
                if (budget > 0)
                    CHECK(table[static_cast<std::size_t>(budget)] >= table[static_cast<std::size_t>(budget - 1)]);
            }
            CHECK(lm_latest_start(problem, total)->start == problem.deadline);
        }
    }

    TEST_CASE("penalty does not grow when the start moves earlier")
    {
        Rng rng(41);
        for (int round = 0; round < 200; ++round) {
            const LmProblem problem = random_problem(rng, 8, 30);
            std::int64_t previous = -1;
            for (std::int64_t start = problem.deadline; start >= 0; --start) {
                const std::int64_t penalty = lawler_moore(problem, start).penalty;
                if (previous >= 0)
                    CHECK(penalty <= previous);
                previous = penalty;
            }
        }
    }
}
