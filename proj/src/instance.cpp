#include "flowsched/instance.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace flowsched {

std::int64_t next_power_of_two_above(std::int64_t value)
{
    std::int64_t t = 1;
    while (t <= value) {
        if (t > std::numeric_limits<std::int64_t>::max() / 2)
            throw InvalidInstance("horizon overflows 64 bits");
        t *= 2;
    }
    return t;
}

Instance::Instance(std::vector<Job> jobs) : jobs_(std::move(jobs))
{
    check_and_index();
}

Instance::Instance(std::vector<Job> jobs, MachineMatrix machines)
    : jobs_(std::move(jobs)), machines_(std::move(machines))
{
    check_and_index();
}

void Instance::check_and_index()
{
    if (jobs_.empty())
        throw InvalidInstance("instance has no jobs");
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
        Job& job = jobs_[i];
        job.id = static_cast<int>(i);
        if (job.p < 1)
            throw InvalidInstance("job " + std::to_string(i) + ": processing time must be >= 1");
        if (job.r < 0)
            throw InvalidInstance("job " + std::to_string(i) + ": release time must be >= 0");
        if (job.w < 1)
            throw InvalidInstance("job " + std::to_string(i) + ": weight must be >= 1");
    }
    if (machines_) {
        if (machines_->empty())
            throw InvalidInstance("machine matrix has no rows");
        for (std::size_t i = 0; i < machines_->size(); ++i) {
            const auto& row = (*machines_)[i];
            if (row.size() != jobs_.size())
                throw InvalidInstance("machine " + std::to_string(i) + ": expected " +
                                      std::to_string(jobs_.size()) + " entries");
            for (std::size_t j = 0; j < row.size(); ++j)
                if (row[j] < 1)
                    throw InvalidInstance("machine " + std::to_string(i) + ", job " + std::to_string(j) +
                                          ": processing time must be >= 1 or inf");
        }
        for (std::size_t j = 0; j < jobs_.size(); ++j) {
            bool finite = false;
            for (const auto& row : *machines_)
                finite = finite || row[j] != kInfinity;
            if (!finite)
                throw InvalidInstance("job " + std::to_string(j) + " has no machine with finite processing time");
        }
    }

    std::stable_sort(jobs_.begin(), jobs_.end(),
                     [](const Job& a, const Job& b) { return a.r != b.r ? a.r < b.r : a.id < b.id; });
    position_.assign(jobs_.size(), 0);
    for (std::size_t k = 0; k < jobs_.size(); ++k)
        position_[static_cast<std::size_t>(jobs_[k].id)] = k;

    if (machines_) {
        const auto n = static_cast<std::int64_t>(jobs_.size());
        const std::int64_t pmax = max_processing();
        if (pmax > (std::numeric_limits<std::int64_t>::max() - max_release()) / n)
            throw InvalidInstance("horizon overflows 64 bits");
        horizon_ = max_release() + n * pmax;
    } else {
        const std::int64_t total = total_processing();
        if (total > std::numeric_limits<std::int64_t>::max() / 2 - max_release())
            throw InvalidInstance("horizon overflows 64 bits");
        horizon_ = next_power_of_two_above(max_release() + total);
    }
}

std::int64_t Instance::processing(std::size_t machine, int id) const
{
    if (machines_)
        return (*machines_).at(machine).at(static_cast<std::size_t>(id));
    if (machine != 0)
        throw std::out_of_range("single-machine instance has only machine 0");
    return job_by_id(id).p;
}

std::int64_t Instance::max_processing() const
{
    std::int64_t best = 0;
    if (machines_) {
        for (const auto& row : *machines_)
            for (auto v : row)
                if (v != kInfinity)
                    best = std::max(best, v);
    } else {
        for (const auto& job : jobs_)
            best = std::max(best, job.p);
    }
    return best;
}

std::int64_t Instance::total_processing() const
{
    std::int64_t total = 0;
    for (const auto& job : jobs_) {
        if (job.p > std::numeric_limits<std::int64_t>::max() / 4 - total)
            throw InvalidInstance("total processing time overflows 64 bits");
        total += job.p;
    }
    return total;
}

bool operator==(const Instance& a, const Instance& b)
{
    if (a.jobs_.size() != b.jobs_.size() || a.machines_ != b.machines_)
        return false;
    for (std::size_t k = 0; k < a.jobs_.size(); ++k) {
        const Job& x = a.jobs_[k];
        const Job& y = b.jobs_[k];
        if (x.id != y.id || x.p != y.p || x.r != y.r || x.w != y.w)
            return false;
    }
    return true;
}

DeadlineAssignment DeadlineAssignment::finalized(std::int64_t horizon) const
{
    DeadlineAssignment out = *this;
    for (auto& value : out.d)
        if (value == kInfinity)
            value = horizon;
    return out;
}

std::vector<std::optional<std::int64_t>> Schedule::completion_ticks(std::size_t job_count) const
{
    std::vector<std::optional<std::int64_t>> out(job_count);
    for (const Slot& slot : slots) {
        if (slot.job < 0 || static_cast<std::size_t>(slot.job) >= job_count)
            continue;
        auto& c = out[static_cast<std::size_t>(slot.job)];
        c = c ? std::max(*c, slot.end) : slot.end;
    }
    return out;
}

std::vector<Rational> Schedule::completion_times(std::size_t job_count) const
{
    std::vector<Rational> out;
    out.reserve(job_count);
    for (const auto& c : completion_ticks(job_count)) {
        if (!c)
            throw std::logic_error("schedule does not process every job");
        out.emplace_back(*c, time_scale);
    }
    return out;
}

Schedule Schedule::normalized() const
{
    std::int64_t g = time_scale;
    for (const Slot& slot : slots)
        g = std::gcd(g, std::gcd(slot.start, slot.end));
    Schedule out = *this;
    if (g > 1) {
        out.time_scale /= g;
        for (Slot& slot : out.slots) {
            slot.start /= g;
            slot.end /= g;
        }
    }
    return out;
}

CostModel::CostModel(Exponent p, Rational eps, ObjectiveMode m) : p_norm(p), epsilon(std::move(eps)), mode(m)
{
    if (epsilon <= 0)
        throw std::invalid_argument("epsilon must be positive");
}

std::string Violation::describe() const
{
    std::ostringstream out;
    out << invariant;
    if (job)
        out << " (job " << *job;
    else
        out << " (";
    if (machine)
        out << (job ? ", " : "") << "machine " << *machine;
    if (time)
        out << ((job || machine) ? ", " : "") << "time " << to_string(*time);
    out << ")";
    return out.str();
}

namespace {

Violation make_violation(std::string what, std::optional<std::size_t> machine, std::optional<int> job,
                         std::optional<std::int64_t> ticks, std::int64_t scale)
{
    Violation v;
    v.invariant = std::move(what);
    v.machine = machine;
    v.job = job;
    if (ticks)
        v.time = Rational(*ticks, scale);
    return v;
}

} // namespace

ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule)
{
    const std::int64_t scale = schedule.time_scale;
    const std::size_t n = instance.size();
    const std::size_t m = instance.machine_count();
    auto fail = [&](std::string what, std::optional<std::size_t> machine, std::optional<int> job,
                    std::optional<std::int64_t> ticks) {
        return ValidationReport{make_violation(std::move(what), machine, job, ticks, scale)};
    };
    if (scale < 1)
        return fail("invalid time scale", std::nullopt, std::nullopt, std::nullopt);

    for (const Slot& slot : schedule.slots) {
        if (slot.job < 0 || static_cast<std::size_t>(slot.job) >= n || slot.machine >= m ||
            slot.start >= slot.end || slot.start < 0)
            return fail("invalid slot", slot.machine, slot.job, slot.start);
        if (instance.processing(slot.machine, slot.job) == kInfinity)
            return fail("infeasible machine", slot.machine, slot.job, slot.start);
        const Rational release(instance.job_by_id(slot.job).r);
        if (Rational(slot.start, scale) < release)
            return fail("starts before release", slot.machine, slot.job, slot.start);
    }

    auto by_start = [](const Slot* a, const Slot* b) {
        return a->start != b->start ? a->start < b->start : a->end < b->end;
    };
    std::vector<std::vector<const Slot*>> per_machine(m);
    std::vector<std::vector<const Slot*>> per_job(n);
    for (const Slot& slot : schedule.slots) {
        per_machine[slot.machine].push_back(&slot);
        per_job[static_cast<std::size_t>(slot.job)].push_back(&slot);
    }
    for (std::size_t i = 0; i < m; ++i) {
        auto& list = per_machine[i];
        std::sort(list.begin(), list.end(), by_start);
        for (std::size_t k = 1; k < list.size(); ++k)
            if (list[k]->start < list[k - 1]->end)
                return fail("machine overlap", i, list[k]->job, list[k]->start);
    }
    for (std::size_t j = 0; j < n; ++j) {
        auto& list = per_job[j];
        std::sort(list.begin(), list.end(), by_start);
        for (std::size_t k = 1; k < list.size(); ++k)
            if (list[k]->start < list[k - 1]->end)
                return fail("parallel execution", list[k]->machine, static_cast<int>(j), list[k]->start);
    }

    for (std::size_t j = 0; j < n; ++j) {
        const int id = static_cast<int>(j);
        const auto& list = per_job[j];
        if (!instance.multi_machine()) {
            std::int64_t total = 0;
            for (const Slot* s : list)
                total += s->end - s->start;
            const Rational amount(total, scale);
            const Rational need(instance.job_by_id(id).p);
            if (amount < need)
                return fail("incomplete processing", std::nullopt, id, std::nullopt);
            if (amount > need)
                return fail("excess processing", std::nullopt, id, std::nullopt);
        } else {
            Rational fraction(0);
            for (const Slot* s : list)
                fraction += Rational(s->end - s->start, scale * instance.processing(s->machine, id));
            if (fraction < 1)
                return fail("incomplete processing", std::nullopt, id, std::nullopt);
        }
    }
    return {};
}

Cost objective_from_completions(const Instance& instance, std::span<const Rational> completion,
                                const Exponent& p)
{
    Cost total;
    for (const Job& job : instance.jobs()) {
        const Rational flow = completion[static_cast<std::size_t>(job.id)] - Rational(job.r);
        total += Cost::power(flow, p, Rational(job.w));
    }
    return total;
}

Cost objective(const Instance& instance, const Schedule& schedule, const CostModel& model)
{
    const ValidationReport report = validate_schedule(instance, schedule);
    if (!report.ok())
        throw ValidationError(*report.violation);
    const auto completion = schedule.completion_times(instance.size());
    return objective_from_completions(instance, completion, model.exponent());
}

} // namespace flowsched
