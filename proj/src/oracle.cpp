#include "flowsched/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

namespace flowsched {

namespace {

[[noreturn]] void too_large()
{
    throw ResourceLimitExceeded("instance too large for oracle");
}

// Completion costs are w (C - r)^p measured in ticks; integer exponents stay
// exact in 128-bit integers, other exponents use high-precision reals. Only
// the argmin is taken from these values; the reported objective is recomputed
// exactly from the schedule.
struct IntCost {
    using Value = __int128;
    Exponent p;
    Value operator()(std::int64_t w, std::int64_t ticks) const
    {
        Value out = w;
        for (int k = 0; k < p.num(); ++k)
            out *= ticks;
        return out;
    }
};

struct RealCost {
    using Value = Real;
    Exponent p;
    Value operator()(std::int64_t w, std::int64_t ticks) const { return Real(w) * real_pow(Real(ticks), p); }
};

Schedule merge_adjacent(Schedule schedule)
{
    std::stable_sort(schedule.slots.begin(), schedule.slots.end(), [](const Slot& a, const Slot& b) {
        return a.machine != b.machine ? a.machine < b.machine : a.start < b.start;
    });
    std::vector<Slot> merged;
    for (const Slot& slot : schedule.slots) {
        if (!merged.empty() && merged.back().machine == slot.machine && merged.back().job == slot.job &&
            merged.back().end == slot.start)
            merged.back().end = slot.end;
        else
            merged.push_back(slot);
    }
    std::stable_sort(merged.begin(), merged.end(), [](const Slot& a, const Slot& b) {
        return a.start != b.start ? a.start < b.start : a.machine < b.machine;
    });
    schedule.slots = std::move(merged);
    return schedule;
}

// ---------------------------------------------------------------- single machine

template <class CostFn>
class SingleSearch {
public:
    using Value = typename CostFn::Value;

    SingleSearch(const Instance& instance, CostFn cost, std::size_t max_states)
        : instance_(instance), cost_(cost), max_states_(max_states)
    {
        const std::size_t n = instance.size();
        klass_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            klass_[k] = k;
            for (std::size_t q = 0; q < k; ++q)
                if (instance.job(q).r == instance.job(k).r && instance.job(q).w == instance.job(k).w) {
                    klass_[k] = q;
                    break;
                }
        }
    }

    Value best(std::int64_t t, std::vector<std::int64_t>& rem)
    {
        t = skip_idle(t, rem);
        if (t < 0)
            return Value(0);
        const std::string key = encode(t, rem);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        std::optional<Value> out;
        for (std::size_t k : choices(t, rem)) {
            const Value v = step_value(t, rem, k);
            if (!out || v < *out)
                out = v;
        }
        if (memo_.size() >= max_states_)
            too_large();
        memo_.emplace(key, *out);
        return *out;
    }

    Schedule rebuild(std::vector<std::int64_t> rem)
    {
        Schedule schedule;
        std::int64_t t = 0;
        while (true) {
            t = skip_idle(t, rem);
            if (t < 0)
                break;
            const Value target = best(t, rem);
            std::optional<std::size_t> pick;
            for (std::size_t k : choices(t, rem))
                if (step_value(t, rem, k) == target) {
                    pick = k;
                    break;
                }
            const std::size_t k = pick.value();
            schedule.slots.push_back({0, t, t + 1, instance_.job(k).id});
            --rem[k];
            ++t;
        }
        return merge_adjacent(std::move(schedule));
    }

    std::size_t states() const { return memo_.size(); }

private:
    // Returns the first time >= t at which released work is pending, or -1 when
    // every job is done. An optimal schedule never idles while work is pending.
    std::int64_t skip_idle(std::int64_t t, const std::vector<std::int64_t>& rem) const
    {
        std::int64_t next = -1;
        for (std::size_t k = 0; k < rem.size(); ++k) {
            if (rem[k] == 0)
                continue;
            const std::int64_t ready = std::max(t, instance_.job(k).r);
            if (next < 0 || ready < next)
                next = ready;
        }
        return next;
    }

    std::vector<std::size_t> choices(std::int64_t t, const std::vector<std::int64_t>& rem) const
    {
        // Among interchangeable jobs (same release, weight and remaining work)
        // only the first needs to be tried.
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < rem.size(); ++k) {
            if (rem[k] == 0 || instance_.job(k).r > t)
                continue;
            bool duplicate = false;
            for (std::size_t q : out)
                duplicate = duplicate || (klass_[q] == klass_[k] && rem[q] == rem[k]);
            if (!duplicate)
                out.push_back(k);
        }
        return out;
    }

    Value step_value(std::int64_t t, std::vector<std::int64_t>& rem, std::size_t k)
    {
        --rem[k];
        Value v = best(t + 1, rem);
        if (rem[k] == 0)
            v += cost_(instance_.job(k).w, t + 1 - instance_.job(k).r);
        ++rem[k];
        return v;
    }

    std::string encode(std::int64_t t, const std::vector<std::int64_t>& rem) const
    {
        std::vector<std::pair<std::size_t, std::int64_t>> items;
        for (std::size_t k = 0; k < rem.size(); ++k)
            if (rem[k] > 0)
                items.emplace_back(klass_[k], rem[k]);
        std::sort(items.begin(), items.end());
        std::string key = std::to_string(t);
        for (const auto& [c, r] : items) {
            key.push_back(':');
            key += std::to_string(c);
            key.push_back(',');
            key += std::to_string(r);
        }
        return key;
    }

    const Instance& instance_;
    CostFn cost_;
    std::size_t max_states_;
    std::vector<std::size_t> klass_;
    std::unordered_map<std::string, Value> memo_;
};

template <class CostFn>
OracleResult run_single(const Instance& instance, const CostModel& model, CostFn cost, const OracleLimits& limits)
{
    SingleSearch<CostFn> search(instance, cost, limits.max_states);
    std::vector<std::int64_t> rem;
    for (const Job& job : instance.jobs())
        rem.push_back(job.p);
    search.best(0, rem);
    OracleResult result;
    result.schedule = search.rebuild(rem);
    result.objective = objective(instance, result.schedule, model);
    result.states = search.states();
    return result;
}

// ----------------------------------------------------------------- grid search

template <class CostFn>
class GridSearch {
public:
    using Value = typename CostFn::Value;

    GridSearch(const Instance& instance, std::int64_t grid, bool migration, CostFn cost, std::int64_t slots,
               std::size_t max_states)
        : instance_(instance), grid_(grid), migration_(migration), cost_(cost), slots_(slots),
          max_states_(max_states), machines_(instance.machine_count())
    {
        unit_ = 1;
        for (std::size_t i = 0; i < machines_; ++i)
            for (const Job& job : instance.jobs()) {
                const std::int64_t p = instance.processing(i, job.id);
                if (p != kInfinity)
                    unit_ = std::lcm(unit_, p);
            }
    }

    // A job needs grid * unit work units; one slot on machine i delivers
    // unit / p_ij of them and lasts `unit` ticks.
    std::int64_t work_per_job() const { return grid_ * unit_; }
    std::int64_t time_scale() const { return grid_ * unit_; }

    struct State {
        std::int64_t slot = 0;
        std::vector<std::int64_t> rem;
        std::vector<int> bound; ///< machine + 1 a job is tied to without migration, else 0
    };

    std::optional<Value> best(State& state)
    {
        if (!advance(state))
            return Value(0);
        if (state.slot >= slots_)
            return std::nullopt;
        const std::string key = encode(state);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        std::optional<Value> out;
        std::vector<int> assignment(machines_, -1);
        enumerate(state, assignment, 0, [&](const std::vector<int>& choice) {
            auto v = step_value(state, choice);
            if (v && (!out || *v < *out))
                out = v;
            return false;
        });
        if (memo_.size() >= max_states_)
            too_large();
        memo_.emplace(key, out);
        return out;
    }

    Schedule rebuild(State state)
    {
        Schedule schedule;
        schedule.time_scale = time_scale();
        while (advance(state)) {
            const auto target = best(state);
            if (!target)
                throw std::logic_error("grid oracle found no feasible schedule");
            std::vector<int> picked;
            std::vector<int> assignment(machines_, -1);
            enumerate(state, assignment, 0, [&](const std::vector<int>& choice) {
                const auto v = step_value(state, choice);
                if (v && *v == *target) {
                    picked = choice;
                    return true;
                }
                return false;
            });
            for (std::size_t i = 0; i < machines_; ++i) {
                const int k = picked[i];
                if (k < 0)
                    continue;
                const auto q = static_cast<std::size_t>(k);
                const std::int64_t p = instance_.processing(i, instance_.job(q).id);
                const std::int64_t gain = unit_ / p;
                const std::int64_t begin = state.slot * unit_;
                const std::int64_t length = state.rem[q] >= gain ? unit_ : state.rem[q] * p;
                schedule.slots.push_back({i, begin, begin + length, instance_.job(q).id});
            }
            apply(state, picked);
        }
        return merge_adjacent(std::move(schedule));
    }

    std::size_t states() const { return memo_.size(); }

private:
    // Moves to the next slot in which some released job is unfinished; false
    // once everything is done.
    bool advance(State& state) const
    {
        std::optional<std::int64_t> next;
        for (std::size_t k = 0; k < state.rem.size(); ++k) {
            if (state.rem[k] == 0)
                continue;
            const std::int64_t ready = std::max(state.slot, instance_.job(k).r * grid_);
            next = next ? std::min(*next, ready) : ready;
        }
        if (!next)
            return false;
        state.slot = *next;
        return true;
    }

    template <class Visit>
    bool enumerate(const State& state, std::vector<int>& assignment, std::size_t machine, Visit&& visit) const
    {
        // Leaving every machine idle is a legal choice: without migration it
        // can pay to wait for a fast machine.
        if (machine == machines_)
            return visit(assignment);
        assignment[machine] = -1;
        if (enumerate(state, assignment, machine + 1, visit))
            return true;
        for (std::size_t k = 0; k < state.rem.size(); ++k) {
            const Job& job = instance_.job(k);
            if (state.rem[k] == 0 || job.r * grid_ > state.slot)
                continue;
            if (instance_.processing(machine, job.id) == kInfinity)
                continue;
            if (!migration_ && state.bound[k] != 0 && state.bound[k] != static_cast<int>(machine) + 1)
                continue;
            if (std::find(assignment.begin(), assignment.begin() + static_cast<std::ptrdiff_t>(machine),
                          static_cast<int>(k)) != assignment.begin() + static_cast<std::ptrdiff_t>(machine))
                continue;
            assignment[machine] = static_cast<int>(k);
            if (enumerate(state, assignment, machine + 1, visit))
                return true;
        }
        assignment[machine] = -1;
        return false;
    }

    // Applies one slot; returns the cost of the jobs finishing in it.
    Value apply(State& state, const std::vector<int>& choice) const
    {
        Value cost(0);
        for (std::size_t i = 0; i < machines_; ++i) {
            const int k = choice[i];
            if (k < 0)
                continue;
            const auto q = static_cast<std::size_t>(k);
            const Job& job = instance_.job(q);
            const std::int64_t p = instance_.processing(i, job.id);
            const std::int64_t gain = unit_ / p;
            if (!migration_)
                state.bound[q] = static_cast<int>(i) + 1;
            if (state.rem[q] <= gain) {
                const std::int64_t finish = state.slot * unit_ + state.rem[q] * p;
                cost += cost_(job.w, finish - job.r * time_scale());
                state.rem[q] = 0;
            } else {
                state.rem[q] -= gain;
            }
        }
        ++state.slot;
        return cost;
    }

    std::optional<Value> step_value(const State& state, const std::vector<int>& choice)
    {
        State next = state;
        const Value here = apply(next, choice);
        auto rest = best(next);
        if (!rest)
            return std::nullopt;
        return here + *rest;
    }

    std::string encode(const State& state) const
    {
        std::string key = std::to_string(state.slot);
        for (std::size_t k = 0; k < state.rem.size(); ++k) {
            key.push_back(':');
            key += std::to_string(state.rem[k]);
            if (!migration_ && state.rem[k] > 0) {
                key.push_back('@');
                key += std::to_string(state.bound[k]);
            }
        }
        return key;
    }

    const Instance& instance_;
    std::int64_t grid_;
    bool migration_;
    CostFn cost_;
    std::int64_t slots_;
    std::size_t max_states_;
    std::size_t machines_;
    std::int64_t unit_ = 1;
    std::unordered_map<std::string, std::optional<Value>> memo_;
};

template <class CostFn>
OracleResult run_grid(const Instance& instance, const CostModel& model, std::int64_t grid, bool migration,
                      CostFn cost, const OracleLimits& limits)
{
    std::int64_t horizon = instance.horizon();
    if (!instance.multi_machine()) {
        // T = max r + n p_max, the same bound the multi-machine case uses.
        horizon = instance.max_release() + static_cast<std::int64_t>(instance.size()) * instance.max_processing();
    }
    const std::int64_t slots = horizon * grid;
    if (slots > limits.max_slots)
        too_large();
    GridSearch<CostFn> search(instance, grid, migration, cost, slots, limits.max_states);
    typename GridSearch<CostFn>::State start;
    start.rem.assign(instance.size(), search.work_per_job());
    start.bound.assign(instance.size(), 0);
    if (!search.best(start))
        throw std::logic_error("grid oracle found no feasible schedule");
    OracleResult result;
    result.schedule = search.rebuild(start);
    result.objective = objective(instance, result.schedule, model);
    result.states = search.states();
    return result;
}

} // namespace

OracleResult oracle_single(const Instance& instance, const CostModel& model, const OracleLimits& limits)
{
    if (instance.multi_machine())
        throw std::invalid_argument("oracle_single needs a single-machine instance");
    if (instance.total_processing() > limits.max_total_processing ||
        instance.max_release() + instance.total_processing() > limits.max_horizon)
        too_large();
    const Exponent p = model.exponent();
    if (p.is_integer() && p.num() <= 8)
        return run_single(instance, model, IntCost{p}, limits);
    return run_single(instance, model, RealCost{p}, limits);
}

OracleResult oracle_multi(const Instance& instance, const CostModel& model, std::int64_t grid, bool migration,
                          const OracleLimits& limits)
{
    if (grid < 1)
        throw std::invalid_argument("grid must be a positive integer");
    if (instance.machine_count() > limits.max_machines)
        too_large();
    const Exponent p = model.exponent();
    if (p.is_integer() && p.num() <= 8)
        return run_grid(instance, model, grid, migration, IntCost{p}, limits);
    return run_grid(instance, model, grid, migration, RealCost{p}, limits);
}

} // namespace flowsched
