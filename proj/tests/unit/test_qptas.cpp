#include "flowsched/gen.hpp"
#include "flowsched/io.hpp"
#include "flowsched/oracle.hpp"
#include "flowsched/qptas.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace flowsched;

namespace {

Instance two_machine(std::uint64_t seed, int max_n)
{
    GenSpec spec;
    spec.n = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(max_n));
    spec.p_max = 3;
    spec.r_max = static_cast<std::int64_t>(seed % 5);
    spec.machines = 2;
    spec.inf_percent = seed % 3 == 0 ? 0 : 25;
    spec.seed = seed;
    return gen_random(spec);
}

bool contains(const std::vector<std::int64_t>& ticks, std::int64_t t)
{
    return std::binary_search(ticks.begin(), ticks.end(), t);
}

} // namespace

TEST_SUITE("qptas")
{
    TEST_CASE("deadline set of a single job")
    {
        const Instance inst({{0, 4, 0, 1}});
        const DeadlineSets d = build_deadlines(inst, Rational(1), 1);
        CHECK(d.horizon == 4);
        CHECK(d.ticks[0] == std::vector<std::int64_t>{0, 1, 2, 4});
    }

    TEST_CASE("deadline sets: anchors, ratio and hierarchy")
    {
        for (std::uint64_t seed = 1; seed <= 60; ++seed) {
            GenSpec spec;
            spec.n = 1 + static_cast<int>(seed % 8);
            spec.p_max = 5;
            spec.r_max = static_cast<std::int64_t>(seed * 3);
            spec.seed = seed;
            const Instance inst = gen_random(spec);
            const Rational eps = seed % 2 == 0 ? Rational(1, 2) : Rational(1, 4);
            const std::int64_t Q = seed % 3 == 0 ? 8 : 4;
            const DeadlineSets d = build_deadlines(inst, eps, Q);
            const std::int64_t end = d.horizon * Q;
            for (std::size_t j = 0; j < inst.size(); ++j) {
                const auto& ticks = d.ticks[j];
                const std::int64_t r = inst.job(j).r * Q;
                CHECK(std::is_sorted(ticks.begin(), ticks.end()));
                CHECK(contains(ticks, r));
                CHECK(contains(ticks, r + Q));
                CHECK(contains(ticks, end));
                CHECK(ticks.front() == r);
                CHECK(ticks.back() == end);
                for (std::size_t k = 0; k + 1 < ticks.size(); ++k) {
                    if (ticks[k] < r + Q)
                        continue;
                    // (d' - r) <= (1 + ε)(d - r)
                    CHECK(Rational(ticks[k + 1] - r) <= (1 + eps) * Rational(ticks[k] - r));
                }
                if (j > 0)
                    for (const std::int64_t t : d.ticks[j - 1])
                        if (t >= r)
                            CHECK(contains(ticks, t));
            }
        }
    }

    TEST_CASE("grid coarser than epsilon is rejected")
    {
        const Instance inst({{0, 1, 0, 1}});
        CHECK_THROWS_AS(build_deadlines(inst, Rational(1, 2), 1), std::invalid_argument);
    }

    TEST_CASE("one machine, one job")
    {
        const Instance inst({{0, 2, 0, 1}}, {{2}});
        QptasOptions options;
        options.ticks_per_unit = 1;
        const QptasResult result = solve_qptas(inst, CostModel(Exponent(1), Rational(1)), options);
        REQUIRE(result.schedule.slots.size() == 2);
        const Schedule s = result.schedule.normalized();
        CHECK(s.completion_times(1)[0] == Rational(2));
        CHECK(result.objective == Cost(Rational(2)));
    }

    TEST_CASE("two unit jobs use both machines")
    {
        const Instance inst({{0, 1, 0, 1}, {1, 1, 0, 1}}, {{1, 1}, {1, 1}});
        QptasOptions options;
        options.ticks_per_unit = 1;
        const QptasResult result = solve_qptas(inst, CostModel(Exponent(1), Rational(1)), options);
        CHECK(result.objective == Cost(Rational(2)));
        CHECK(validate_schedule(inst, result.schedule).ok());
    }

    TEST_CASE("a machine with INF processing time is never used")
    {
        const Instance inst({{0, 2, 0, 1}, {1, 1, 0, 3}}, {{2, kInfinity}, {1, 1}});
        QptasOptions options;
        options.ticks_per_unit = 1;
        const QptasResult result = solve_qptas(inst, CostModel(Exponent(1), Rational(1)), options);
        CHECK(validate_schedule(inst, result.schedule).ok());
        for (const Slot& slot : result.schedule.slots)
            if (slot.job == 1)
                CHECK(slot.machine == 1);
    }

    TEST_CASE("within (1+eps)^3 of the grid optimum")
    {
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const Instance inst = two_machine(seed, 4);
            for (const int pe : {1, 2}) {
                for (const Rational& eps : {Rational(1), Rational(1, 2)}) {
                    const CostModel model(Exponent(pe), eps);
                    const std::int64_t grid = eps == 1 ? 1 : 2;
                    QptasOptions options;
                    options.ticks_per_unit = grid;
                    Cost previous;
                    for (const bool migration : {false, true}) {
                        options.migration = migration;
                        const QptasResult result = solve_qptas(inst, model, options);
                        CHECK(validate_schedule(inst, result.schedule).ok());
                        CHECK(result.objective <= result.charged_cost);
                        const Cost opt = oracle_multi(inst, model, grid, migration).objective;
                        CHECK(opt <= result.objective);
                        const Rational factor = (1 + eps) * (1 + eps) * (1 + eps);
                        CHECK(result.objective <= opt.scaled(factor));
                        if (migration)
                            CHECK(result.charged_cost <= previous);
                        previous = result.charged_cost;
                        CHECK(result.stats.residual_checks > 0);
                        CHECK(result.stats.subdivision_checks + (inst.size() == 1 ? 1 : 0) > 0);
                        CHECK(result.stats.completion_checks >= result.stats.residual_checks);
                    }
                }
            }
        }
    }

    TEST_CASE("bound pruning keeps the optimum of the DP")
    {
        for (std::uint64_t seed = 1; seed <= 14; ++seed) {
            const Instance inst = two_machine(seed, 3);
            for (const bool migration : {false, true}) {
                QptasOptions options;
                options.ticks_per_unit = 1;
                options.migration = migration;
                const CostModel model(Exponent(seed % 2 == 0 ? 2 : 1), Rational(1));
                const QptasResult pruned = solve_qptas(inst, model, options);
                options.bound_pruning = false;
                const QptasResult full = solve_qptas(inst, model, options);
                CHECK(pruned.charged_cost == full.charged_cost);
                CHECK(pruned.stats.transitions <= full.stats.transitions);
            }
        }
    }

    TEST_CASE("fractional exponents")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Instance inst = two_machine(seed, 3);
            const CostModel model(Exponent(1, 2), Rational(1));
            QptasOptions options;
            options.ticks_per_unit = 1;
            const QptasResult result = solve_qptas(inst, model, options);
            CHECK(validate_schedule(inst, result.schedule).ok());
            const Cost opt = oracle_multi(inst, model, 1, true).objective;
            CHECK(result.objective <= opt.scaled(Rational(8)));
        }
    }

    TEST_CASE("repeated runs give identical schedules")
    {
        const Instance inst = two_machine(7, 4);
        QptasOptions options;
        options.ticks_per_unit = 2;
        const CostModel model(Exponent(2), Rational(1, 2));
        const QptasResult a = solve_qptas(inst, model, options);
        const QptasResult b = solve_qptas(inst, model, options);
        CHECK(write_schedule(a.schedule) == write_schedule(b.schedule));
    }

    TEST_CASE("default grid and epsilon rounding")
    {
        const Instance inst({{0, 1, 0, 1}, {1, 1, 1, 1}}, {{1, 1}, {1, 1}});
        const QptasResult result = solve_qptas(inst, CostModel(Exponent(1), Rational(2, 3)));
        CHECK(result.epsilon == Rational(1, 2));
        CHECK(result.delta == Rational(1, 8)); // ε' / n^m
        CHECK(result.objective == Cost(Rational(2)));
    }

    TEST_CASE("too many machines")
    {
        CHECK_THROWS_AS(solve_qptas(Instance({{0, 1, 0, 1}}, {{1}, {1}, {1}, {1}}), CostModel()), std::invalid_argument);
    }
}
