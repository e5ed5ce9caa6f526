#include "flowsched/dp_pseudo.hpp"
#include "flowsched/gen.hpp"
#include "flowsched/io.hpp"
#include "flowsched/oracle.hpp"

#include <doctest.h>

using namespace flowsched;

namespace {

Instance small_random(std::uint64_t seed, int max_n = 7, std::int64_t max_total = 16)
{
    Rng rng(seed);
    std::vector<Job> jobs;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n)));
    std::int64_t total = 0;
    for (int k = 0; k < n; ++k) {
        Job job;
        job.p = rng.between(1, std::max<std::int64_t>(1, std::min<std::int64_t>(5, max_total - total - (n - k - 1))));
        job.r = rng.between(0, 8);
        job.w = rng.between(1, 6);
        total += job.p;
        jobs.push_back(job);
    }
    return Instance(std::move(jobs));
}

const CostModel kFlow(Exponent(1), Rational(1));

} // namespace

TEST_SUITE("dp_pseudo")
{
    TEST_CASE("dyadic tree layout")
    {
        const DyadicTree tree(8);
        CHECK(tree.start(1) == 0);
        CHECK(tree.length(1) == 8);
        CHECK(tree.start(5) == 2);
        CHECK(tree.length(5) == 2);
        CHECK(tree.is_leaf(15));
        CHECK(tree.start(15) == 7);
        CHECK(tree.node_of(2, 2) == 5);
        CHECK(tree.earliest_start(1) == 0);
        CHECK(tree.earliest_start(3) == 0);           // [4,8): max(0, 4 - 12)
        CHECK(tree.earliest_start(7) == 0);           // [6,8): max(0, 6 - 6)
        CHECK(tree.earliest_start(6) == 0);           // [4,6): max(0, 4 - 4)
        CHECK(tree.earliest_start(14) == 4);          // [6,7): max(0, 6 - 2)
        CHECK(tree.earliest_start(15) == 4);          // [7,8): max(0, 7 - 3)
        CHECK_THROWS(DyadicTree(6));
    }

    TEST_CASE("cell cost function")
    {
        const Job job{0, 2, 1, 3};
        CHECK(cell_cost(job, 4, 4, 8) == 0);
        CHECK(cell_cost(job, 6, 4, 8) == 15);
        CHECK(cell_cost(job, kInfinity, 4, 8) == 21);
    }

    TEST_CASE("leaf cells send recent jobs to INF")
    {
        const Instance inst({{0, 1, 3, 2}, {0, 1, 3, 5}});
        PseudoDp dp(inst);
        dp.solve();
        const std::int64_t leaf = dp.tree().node_of(3, 1);
        for (std::int64_t b = dp.tree().earliest_start(leaf); b <= 3; ++b) {
            const auto cell = dp.cell(leaf, b);
            REQUIRE(cell.jobs.size() == 2);
            CHECK(cell.deadlines[0] == kInfinity);
            CHECK(cell.deadlines[1] == kInfinity);
            CHECK(cell.cost == 7);
        }
    }

    TEST_CASE("empty cells cost nothing")
    {
        const Instance inst({{0, 1, 5, 1}});
        PseudoDp dp(inst);
        dp.solve();
        const std::int64_t node = dp.tree().node_of(0, 1);
        const auto cell = dp.cell(node, 0);
        CHECK(cell.jobs.empty());
        CHECK(cell.cost == 0);
    }

    TEST_CASE("single job and two identical jobs are solved optimally")
    {
        const PseudoResult one = solve_pseudo(Instance({{0, 1, 0, 1}}));
        CHECK(one.objective == Cost(Rational(1)));
        CHECK(one.schedule.slots.size() == 1);
        CHECK(one.schedule.slots[0].start == 0);
        const PseudoResult two = solve_pseudo(Instance({{0, 1, 0, 1}, {0, 1, 0, 1}}));
        CHECK(two.objective == Cost(Rational(3)));
    }

    TEST_CASE("three-job example stays within six times the optimum")
    {
        const Instance inst({{0, 1, 0, 1}, {0, 2, 0, 1}, {0, 1, 1, 5}});
        PseudoDp dp(inst);
        dp.solve();
        const Cost opt = oracle_single(inst, kFlow).objective;
        CHECK(opt == Cost(Rational(10)));
        CHECK(Cost(Rational(dp.root_cost())) <= opt.scaled(6));
        CHECK(solve_pseudo(inst).objective <= opt.scaled(6));
    }

    TEST_CASE("every cell's deadlines are feasible from its start time")
    {
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const Instance inst = small_random(seed);
            PseudoDp dp(inst);
            dp.solve();
            const DyadicTree& tree = dp.tree();
            for (std::int64_t node = 1; node < tree.node_count(); ++node) {
                for (std::int64_t b = tree.earliest_start(node); b <= tree.start(node); ++b) {
                    const auto cell = dp.cell(node, b);
                    std::vector<DeadlineJob> jobs;
                    std::int64_t far = b + inst.max_release();
                    for (std::size_t q = cell.jobs.first; q < cell.jobs.last; ++q)
                        far += inst.job(q).p;
                    for (std::size_t q = cell.jobs.first; q < cell.jobs.last; ++q) {
                        const Job& job = inst.job(q);
                        const std::int64_t d = cell.deadlines[q - cell.jobs.first];
                        CHECK((d == kInfinity || (d >= cell.s && d < cell.t)));
                        jobs.push_back({job.id, job.p, std::max(job.r, b), d == kInfinity ? far : d});
                    }
                    CHECK(density_feasible(jobs));
                }
            }
        }
    }

    TEST_CASE("ratio, makespan and cell count on random instances")
    {
        for (std::uint64_t seed = 100; seed < 160; ++seed) {
            const Instance inst = small_random(seed);
            const PseudoResult result = solve_pseudo(inst);
            CHECK(validate_schedule(inst, result.schedule).ok());
            for (const auto& c : result.schedule.completion_ticks(inst.size()))
                CHECK(*c <= inst.horizon());
            const Cost opt = oracle_single(inst, kFlow).objective;
            CHECK(opt <= result.objective);
            CHECK(result.objective <= opt.scaled(6));
            CHECK(Cost(Rational(result.root_cost)) <= opt.scaled(6));
            const auto T = static_cast<std::size_t>(inst.horizon());
            CHECK(result.cells <= 4 * T * T);
        }
    }

    TEST_CASE("threads do not change the answer")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            GenSpec spec;
            spec.n = 9;
            spec.p_max = 5;
            spec.r_max = 12;
            spec.seed = seed;
            const Instance inst = gen_random(spec);
            PseudoOptions parallel;
            parallel.threads = 3;
            const PseudoResult a = solve_pseudo(inst);
            const PseudoResult b = solve_pseudo(inst, parallel);
            CHECK(a.deadlines == b.deadlines);
            CHECK(write_schedule(a.schedule) == write_schedule(b.schedule));
        }
    }

    TEST_CASE("multi-machine instances are rejected")
    {
        CHECK_THROWS_AS(solve_pseudo(Instance({{0, 1, 0, 1}}, {{1}, {2}})), std::invalid_argument);
    }
}
