#include "flowsched/dp_poly.hpp"

#include "flowsched/edf.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

namespace flowsched {

namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max() / 4;

Cost multiply(const Cost& a, const Cost& b)
{
    if (a.exact() && b.exact())
        return Cost(Rational(a.rational() * b.rational()));
    return Cost(Real(a.real() * b.real()));
}

std::int64_t saturating_floor(const Rational& value)
{
    if (value >= Rational(kSaturated))
        return kSaturated;
    return floor_to_int64(value);
}

std::int64_t saturating_floor(const Real& value)
{
    if (value >= Real(kSaturated))
        return kSaturated;
    return certified_floor(value);
}

std::int64_t add_capped(std::int64_t a, std::int64_t b, std::int64_t cap)
{
    return std::min(cap, std::min(a, cap) + std::min(b, cap));
}

} // namespace

Cost floor_to_unit(const Cost& x, const Cost& unit)
{
    if (x.exact() && unit.exact()) {
        const Rational q = x.rational() / unit.rational();
        const BigInt whole = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
        return Cost(Rational(Rational(whole) * unit.rational()));
    }
    const Real whole = Real(saturating_floor(Real(x.real() / unit.real())));
    return Cost(Real(whole * unit.real()));
}

Cost poly_factor(const Exponent& p)
{
    const Cost two = Cost::power(2, p);
    const Cost three = Cost::power(3, p);
    const Cost four = Cost::power(4, p);
    if (p.is_integer()) {
        const Rational f = two.rational() + four.rational() / (four.rational() - three.rational());
        return Cost(f);
    }
    return Cost(Real(two.real() + four.real() / (four.real() - three.real())));
}

BudgetGrid::BudgetGrid(const Instance& instance, const Exponent& p, const Rational& epsilon)
    : p_(p), epsilon_(epsilon)
{
    if (epsilon <= 0)
        throw std::invalid_argument("epsilon must be positive");
    if (instance.size() == 0)
        throw std::invalid_argument("empty instance");
    for (const Job& job : instance.jobs())
        lb_ += Cost::power(job.p, p, job.w);
    const auto n = static_cast<std::int64_t>(instance.size());
    unit_ = lb_.scaled(epsilon / n);
    // B_max / unit = factor * n^(p+1) / eps, independent of LB.
    const Cost scaled = multiply(poly_factor(p), Cost::power(n, p)).scaled(Rational(n) / epsilon);
    max_units_ = scaled.exact() ? saturating_floor(scaled.rational()) : saturating_floor(scaled.real());
}

std::int64_t BudgetGrid::units_below(const Cost& x) const
{
    if (x.exact() && unit_.exact())
        return saturating_floor(Rational(x.rational() / unit_.rational()));
    return saturating_floor(Real(x.real() / unit_.real()));
}

std::int64_t BudgetGrid::job_units(const Job& job, std::int64_t flow) const
{
    return units_below(Cost::power(flow, p_, job.w));
}

PolyDp::PolyDp(const Instance& instance, const CostModel& model, PolyOptions options)
    : instance_(instance), p_(model.exponent()), options_(options), tree_(instance.horizon()),
      grid_(instance, model.exponent(), model.epsilon)
{
    if (instance.multi_machine())
        throw std::invalid_argument("the budgeted DP needs a single-machine instance");

    // Interval [s, t) is kept iff some job is released in [s - 7len, t + len).
    for (int depth = 0; depth <= tree_.levels(); ++depth) {
        const std::int64_t len = tree_.horizon() >> depth;
        for (const Job& job : instance.jobs()) {
            // s ranges over the multiples of len in (r - 2len, r + 7len].
            const std::int64_t lo = std::max<std::int64_t>(0, (job.r / len - 1) * len);
            const std::int64_t hi = std::min(job.r + 7 * len, tree_.horizon() - len);
            for (std::int64_t s = lo; s <= hi; s += len) {
                const std::int64_t node = tree_.node_of(s, len);
                if (nodes_.emplace(node, Node{}).second)
                    ++materialized_count_;
            }
        }
    }
    for (auto& [node, entry] : nodes_) {
        entry.materialized = true;
        entry.b0 = tree_.earliest_start(node);
        const std::int64_t s = tree_.start(node);
        const std::int64_t len = tree_.length(node);
        entry.jobs = tree_.cell_jobs(instance_, node);
        entry.split = std::max(entry.jobs.first, jobs_released_in(instance_, 0, s - len + 1).last);
    }
}

bool PolyDp::materialized(std::int64_t node) const
{
    return nodes_.count(node) != 0;
}

std::int64_t PolyDp::cost_units(const Job& job, std::int64_t d, std::int64_t s, std::int64_t t) const
{
    if (d == s)
        return 0;
    const std::int64_t flow = std::min(d, t) - job.r;
    const std::lock_guard<std::mutex> lock(cache_mutex_);
    const auto key = std::make_pair(job.id, flow);
    auto it = unit_cache_.find(key);
    if (it == unit_cache_.end())
        it = unit_cache_.emplace(key, grid_.job_units(job, flow)).first;
    return it->second;
}

void PolyDp::solve(std::int64_t cap)
{
    if (cap < 0)
        throw std::invalid_argument("negative budget cap");
    const __int128 entries = static_cast<__int128>(cap + 1) * static_cast<__int128>(materialized_count_);
    if (entries > options_.max_table_entries)
        throw ResourceLimitExceeded("budget grid of " + std::to_string(cap + 1) + " points over " +
                                    std::to_string(materialized_count_) + " intervals exceeds the table limit");
    cap_ = cap;
    std::vector<std::vector<std::int64_t>> levels(static_cast<std::size_t>(tree_.levels() + 1));
    for (auto& [node, entry] : nodes_) {
        entry.best.clear();
        levels[static_cast<std::size_t>(DyadicTree::depth(node))].push_back(node);
    }
    for (int depth = tree_.levels(); depth >= 0; --depth) {
        auto& level = levels[static_cast<std::size_t>(depth)];
        std::sort(level.begin(), level.end());
        const auto count = static_cast<std::int64_t>(level.size());
        const auto workers = static_cast<std::int64_t>(std::max(1, options_.threads));
        auto run = [&](std::int64_t node) {
            if (options_.full_enumeration)
                solve_node_full(node);
            else
                solve_node(node);
        };
        if (workers == 1 || count < 2) {
            for (const std::int64_t node : level)
                run(node);
        } else {
            std::vector<std::thread> pool;
            for (std::int64_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    for (std::int64_t k = w; k < count; k += workers)
                        run(level[static_cast<std::size_t>(k)]);
                });
            for (auto& thread : pool)
                thread.join();
        }
    }
}

LmProblem PolyDp::far_problem(std::int64_t node, std::int64_t deadline) const
{
    const Node& entry = nodes_.at(node);
    const std::int64_t s = tree_.start(node);
    const std::int64_t t = tree_.end(node);
    LmProblem far;
    far.deadline = deadline;
    for (std::size_t q = entry.jobs.first; q < entry.split; ++q) {
        const Job& job = instance_.job(q);
        far.jobs.push_back({job.p, job.r, std::min(cost_units(job, kInfinity, s, t), cap_ + 1)});
    }
    return far;
}

std::int64_t PolyDp::leaf_recent_units(std::int64_t node) const
{
    const Node& entry = nodes_.at(node);
    const std::int64_t s = tree_.start(node);
    const std::int64_t t = tree_.end(node);
    std::int64_t total = 0;
    for (std::size_t q = entry.split; q < entry.jobs.last; ++q)
        total = add_capped(total, cost_units(instance_.job(q), kInfinity, s, t), cap_ + 1);
    return total;
}

const std::vector<std::int64_t>& PolyDp::child(std::int64_t node) const
{
    auto it = nodes_.find(node);
    if (it == nodes_.end())
        throw std::logic_error("a cell with jobs has a child interval that was not materialized");
    return it->second.best;
}

namespace {

struct Breakpoint {
    std::int64_t budget; ///< smallest B1 + B2 reaching `start`
    std::int64_t start;  ///< min of the two child starts
};

std::int64_t first_reaching(const std::vector<std::int64_t>& table, std::int64_t value)
{
    const auto it = std::lower_bound(table.begin(), table.end(), value);
    return it == table.end() ? -1 : static_cast<std::int64_t>(it - table.begin());
}

/// Pareto list of g(m) = max over B1 of min(left[B1], right[m - B1]): g(m) is
/// the start of the last breakpoint with budget <= m. Both tables are
/// nondecreasing, so g(m) >= v iff m >= first(left, v) + first(right, v).
std::vector<Breakpoint> combine(const std::vector<std::int64_t>& left, const std::vector<std::int64_t>& right,
                                std::int64_t cap)
{
    std::vector<std::int64_t> values;
    for (const std::int64_t v : left)
        if (v != kNoStart)
            values.push_back(v);
    for (const std::int64_t v : right)
        if (v != kNoStart)
            values.push_back(v);
    std::sort(values.begin(), values.end(), std::greater<>());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<Breakpoint> out;
    std::int64_t cheapest = cap + 1;
    for (const std::int64_t v : values) {
        const std::int64_t a = first_reaching(left, v);
        const std::int64_t b = first_reaching(right, v);
        if (a < 0 || b < 0 || a + b >= cheapest)
            continue;
        cheapest = a + b;
        out.push_back({cheapest, v});
    }
    return out;
}

std::int64_t combined_start(const std::vector<Breakpoint>& points, std::int64_t budget)
{
    std::int64_t best = kNoStart;
    for (const Breakpoint& point : points)
        if (point.budget <= budget)
            best = std::max(best, point.start);
    return best;
}

} // namespace

void PolyDp::solve_node(std::int64_t node)
{
    Node& entry = nodes_.at(node);
    const std::int64_t s = tree_.start(node);
    entry.best.assign(static_cast<std::size_t>(cap_ + 1), kNoStart);
    if (entry.jobs.empty()) {
        std::fill(entry.best.begin(), entry.best.end(), s);
        return;
    }
    const bool far_empty = entry.split == entry.jobs.first;
    if (tree_.is_leaf(node)) {
        const std::int64_t recent = leaf_recent_units(node);
        if (recent > cap_)
            return;
        const std::vector<std::int64_t> table = lm_latest_start_table(far_problem(node, s), cap_ - recent);
        for (std::int64_t k = recent; k <= cap_; ++k)
            entry.best[static_cast<std::size_t>(k)] = table[static_cast<std::size_t>(k - recent)];
    } else {
        const auto points = combine(child(2 * node), child(2 * node + 1), cap_);
        for (const Breakpoint& point : points) {
            std::vector<std::int64_t> table;
            if (far_empty)
                table.assign(static_cast<std::size_t>(cap_ - point.budget + 1), point.start);
            else
                table = lm_latest_start_table(far_problem(node, point.start), cap_ - point.budget);
            for (std::int64_t k = point.budget; k <= cap_; ++k) {
                auto& slot = entry.best[static_cast<std::size_t>(k)];
                slot = std::max(slot, table[static_cast<std::size_t>(k - point.budget)]);
            }
        }
    }
    for (std::int64_t k = 0; k <= cap_; ++k) {
        const std::int64_t b = entry.best[static_cast<std::size_t>(k)];
        if (b == kNoStart)
            continue;
        if (b < entry.b0 || b > s)
            throw std::logic_error("cell start outside [b0, s]");
        if (k > 0 && entry.best[static_cast<std::size_t>(k - 1)] > b)
            throw std::logic_error("cell start decreased with a larger budget");
    }
}

void PolyDp::solve_node_full(std::int64_t node)
{
    Node& entry = nodes_.at(node);
    const std::int64_t s = tree_.start(node);
    entry.best.assign(static_cast<std::size_t>(cap_ + 1), kNoStart);
    if (entry.jobs.empty()) {
        std::fill(entry.best.begin(), entry.best.end(), s);
        return;
    }
    auto latest = [&](std::int64_t deadline, std::int64_t budget) {
        const auto solution = lm_latest_start(far_problem(node, deadline), budget);
        return solution ? solution->start : kNoStart;
    };
    for (std::int64_t k = 0; k <= cap_; ++k) {
        std::int64_t best = kNoStart;
        if (tree_.is_leaf(node)) {
            const std::int64_t recent = leaf_recent_units(node);
            for (std::int64_t b0 = 0; b0 + recent <= k; ++b0)
                best = std::max(best, latest(s, b0));
        } else {
            const auto& left = child(2 * node);
            const auto& right = child(2 * node + 1);
            for (std::int64_t b0 = 0; b0 <= k; ++b0)
                for (std::int64_t b1 = 0; b0 + b1 <= k; ++b1)
                    for (std::int64_t b2 = 0; b0 + b1 + b2 <= k; ++b2) {
                        const std::int64_t x = left[static_cast<std::size_t>(b1)];
                        const std::int64_t y = right[static_cast<std::size_t>(b2)];
                        if (x == kNoStart || y == kNoStart)
                            continue;
                        best = std::max(best, latest(std::min(x, y), b0));
                    }
        }
        entry.best[static_cast<std::size_t>(k)] = best;
    }
}

std::optional<std::int64_t> PolyDp::start(std::int64_t node, std::int64_t budget) const
{
    if (budget < 0 || budget > cap_)
        throw std::out_of_range("budget outside the solved grid");
    const auto it = nodes_.find(node);
    if (it == nodes_.end())
        return tree_.start(node);
    const std::int64_t b = it->second.best[static_cast<std::size_t>(budget)];
    if (b == kNoStart)
        return std::nullopt;
    return b;
}

PolyDp::CellSolution PolyDp::solution(std::int64_t node, std::int64_t budget) const
{
    const std::int64_t s = tree_.start(node);
    const std::int64_t t = tree_.end(node);
    CellSolution out;
    out.b0 = tree_.earliest_start(node);
    out.jobs = tree_.cell_jobs(instance_, node);
    const auto b = start(node, budget);
    if (!b)
        throw std::invalid_argument("infeasible cell has no solution");
    out.b = *b;
    out.deadlines.assign(out.jobs.size(), kInfinity);
    if (out.jobs.empty())
        return out;
    const Node& entry = nodes_.at(node);

    auto assign_far = [&](std::int64_t deadline, std::int64_t far_budget) {
        const auto far = lm_latest_start(far_problem(node, deadline), far_budget);
        if (!far || far->start != out.b)
            throw std::logic_error("traceback disagrees with the stored cell start");
        for (std::size_t k = 0; k < far->on_time.size(); ++k)
            out.deadlines[k] = far->on_time[k] ? s : kInfinity;
    };

    if (tree_.is_leaf(node)) {
        assign_far(s, budget - leaf_recent_units(node));
    } else {
        const auto& left = child(2 * node);
        const auto& right = child(2 * node + 1);
        const auto points = combine(left, right, cap_);
        std::map<std::int64_t, std::vector<std::int64_t>> tables;
        auto far_start = [&](std::int64_t deadline, std::int64_t far_budget) {
            if (entry.split == entry.jobs.first)
                return deadline;
            auto it = tables.find(deadline);
            if (it == tables.end())
                it = tables.emplace(deadline, lm_latest_start_table(far_problem(node, deadline), cap_)).first;
            return it->second[static_cast<std::size_t>(far_budget)];
        };
        // Lexicographically smallest (B0, B1); B2 takes the rest.
        std::int64_t b0 = 0;
        std::int64_t b1 = -1;
        for (; b0 <= budget && b1 < 0; ++b0) {
            const std::int64_t m = budget - b0;
            const std::int64_t g = combined_start(points, m);
            if (g == kNoStart || far_start(g, b0) != out.b)
                continue;
            for (std::int64_t x = 0; x <= m; ++x) {
                const std::int64_t y1 = left[static_cast<std::size_t>(x)];
                const std::int64_t y2 = right[static_cast<std::size_t>(m - x)];
                if (y1 == kNoStart || y2 == kNoStart)
                    continue;
                if (far_start(std::min(y1, y2), b0) == out.b) {
                    b1 = x;
                    break;
                }
            }
        }
        if (b1 < 0)
            throw std::logic_error("no budget split reproduces the cell start");
        --b0;
        const std::int64_t b2 = budget - b0 - b1;
        const std::int64_t joint = std::min(left[static_cast<std::size_t>(b1)], right[static_cast<std::size_t>(b2)]);
        assign_far(joint, b0);

        const CellSolution first = solution(2 * node, b1);
        const CellSolution second = solution(2 * node + 1, b2);
        const std::int64_t a = s + tree_.length(node) / 2;
        for (std::size_t q = entry.split; q < entry.jobs.last; ++q) {
            const std::int64_t d2 = second.deadlines[q - second.jobs.first];
            std::int64_t d = d2;
            if (d2 <= a) {
                if (q < first.jobs.first || q >= first.jobs.last)
                    throw std::logic_error("merged deadline refers to a job outside the left cell");
                d = std::min(first.deadlines[q - first.jobs.first], a);
            }
            out.deadlines[q - out.jobs.first] = d;
        }
    }
    for (std::size_t q = out.jobs.first; q < out.jobs.last; ++q)
        out.cost_units = add_capped(out.cost_units, cost_units(instance_.job(q), out.deadlines[q - out.jobs.first], s, t),
                                    kSaturated);
    return out;
}

Cost greedy_upper_bound(const Instance& instance, const Exponent& p)
{
    const std::size_t n = instance.size();
    std::vector<std::int64_t> remaining(n);
    std::vector<Rational> completion(n);
    for (std::size_t q = 0; q < n; ++q)
        remaining[q] = instance.job(q).p;
    std::size_t next = 0;
    std::size_t done = 0;
    std::int64_t now = 0;
    while (done < n) {
        if (next < n && instance.job(next).r <= now) {
            ++next;
            continue;
        }
        std::size_t pick = n;
        for (std::size_t q = 0; q < next; ++q) {
            if (remaining[q] == 0)
                continue;
            // Highest w / remaining, earliest position on ties.
            if (pick == n || static_cast<__int128>(instance.job(q).w) * remaining[pick] >
                                 static_cast<__int128>(instance.job(pick).w) * remaining[q])
                pick = q;
        }
        if (pick == n) {
            now = instance.job(next).r;
            continue;
        }
        std::int64_t until = now + remaining[pick];
        if (next < n)
            until = std::min(until, instance.job(next).r);
        remaining[pick] -= until - now;
        now = until;
        if (remaining[pick] == 0) {
            completion[static_cast<std::size_t>(instance.job(pick).id)] = now;
            ++done;
        }
    }
    return objective_from_completions(instance, completion, p);
}

PolyResult solve_poly(const Instance& instance, const CostModel& model, PolyOptions options)
{
    PolyDp dp(instance, model, options);
    const BudgetGrid& grid = dp.grid();
    PolyResult result;
    result.grid_max = grid.max_units();
    std::int64_t cap = grid.max_units();
    if (options.budget_cap) {
        cap = std::min(cap, *options.budget_cap);
    } else {
        const Cost bound = multiply(poly_factor(model.exponent()), greedy_upper_bound(instance, model.exponent()));
        cap = std::min(cap, grid.units_below(bound) + 1);
    }

    auto root_budget = [&]() -> std::optional<std::int64_t> {
        for (std::int64_t k = 0; k <= dp.cap(); ++k)
            if (dp.start(1, k))
                return k;
        return std::nullopt;
    };
    dp.solve(cap);
    auto found = root_budget();
    if (!found && cap < grid.max_units()) {
        dp.solve(grid.max_units());
        result.used_full_grid = true;
        found = root_budget();
    }
    if (!found)
        throw std::logic_error("no feasible root budget on the grid");

    const std::int64_t horizon = instance.horizon();
    const PolyDp::CellSolution root = dp.solution(1, *found);
    DeadlineAssignment deadlines;
    deadlines.d.assign(instance.size(), kInfinity);
    for (std::size_t q = root.jobs.first; q < root.jobs.last; ++q)
        deadlines.d[static_cast<std::size_t>(instance.job(q).id)] = root.deadlines[q - root.jobs.first];
    result.deadlines = deadlines.finalized(horizon);
    EdfResult edf = edf_schedule(instance, result.deadlines);
    if (!edf.met_all_deadlines)
        throw std::logic_error("EDF missed a deadline produced by the budgeted DP");
    result.schedule = std::move(edf.schedule);
    result.objective = objective(instance, result.schedule, model);
    result.root_budget_units = *found;
    result.root_budget = grid.unit().scaled(Rational(*found));
    result.rounded_cost_units = root.cost_units;
    result.intervals = dp.materialized_count();
    result.grid_cap = dp.cap();
    return result;
}

} // namespace flowsched
