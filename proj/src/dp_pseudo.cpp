#include "flowsched/dp_pseudo.hpp"

#include "flowsched/lawler_moore.hpp"

#include <algorithm>
#include <thread>

namespace flowsched {

std::int64_t cell_cost(const Job& job, std::int64_t d, std::int64_t s, std::int64_t t)
{
    if (d == s)
        return 0;
    return job.w * (std::min(d, t) - job.r);
}

PseudoDp::PseudoDp(const Instance& instance, PseudoOptions options)
    : instance_(instance), options_(options), tree_(instance.horizon())
{
    if (instance.multi_machine())
        throw std::invalid_argument("the pseudopolynomial DP needs a single-machine instance");
    if (instance.horizon() > options.max_horizon)
        throw ResourceLimitExceeded("horizon " + std::to_string(instance.horizon()) +
                                    " exceeds the pseudopolynomial DP limit of " +
                                    std::to_string(options.max_horizon));
    // Every cell cost is at most sum_j w_j T.
    __int128 bound = 0;
    for (const Job& job : instance.jobs())
        bound += static_cast<__int128>(job.w) * instance.horizon();
    if (bound > (static_cast<__int128>(1) << 62))
        throw ResourceLimitExceeded("weights too large for 64-bit cell costs");
}

void PseudoDp::solve()
{
    nodes_.assign(static_cast<std::size_t>(tree_.node_count()), Node{});
    cell_count_ = 0;
    for (int depth = tree_.levels(); depth >= 0; --depth) {
        const std::int64_t first = std::int64_t{1} << depth;
        const std::int64_t count = first;
        const auto workers = static_cast<std::int64_t>(std::max(1, options_.threads));
        if (workers == 1 || count < 2) {
            for (std::int64_t node = first; node < first + count; ++node)
                solve_node(node);
        } else {
            // Nodes of one level only read the level below, so any split of the
            // level across threads produces the same table.
            std::vector<std::thread> pool;
            for (std::int64_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    for (std::int64_t node = first + w; node < first + count; node += workers)
                        solve_node(node);
                });
            for (auto& thread : pool)
                thread.join();
        }
        for (std::int64_t node = first; node < first + count; ++node)
            cell_count_ += nodes_[static_cast<std::size_t>(node)].cells.size();
    }
}

void PseudoDp::solve_node(std::int64_t node)
{
    Node& entry = nodes_[static_cast<std::size_t>(node)];
    entry.b0 = tree_.earliest_start(node);
    entry.jobs = tree_.cell_jobs(instance_, node);
    const std::int64_t s = tree_.start(node);
    entry.cells.clear();
    entry.cells.reserve(static_cast<std::size_t>(s - entry.b0 + 1));
    for (std::int64_t b = entry.b0; b <= s; ++b)
        entry.cells.push_back(solve_cell(node, b));
}

const PseudoDp::Cell& PseudoDp::lookup(std::int64_t node, std::int64_t b) const
{
    const Node& entry = nodes_[static_cast<std::size_t>(node)];
    if (b < entry.b0 || b - entry.b0 >= static_cast<std::int64_t>(entry.cells.size()))
        throw std::logic_error("lookup of a cell that does not exist");
    return entry.cells[static_cast<std::size_t>(b - entry.b0)];
}

PseudoDp::Cell PseudoDp::solve_cell(std::int64_t node, std::int64_t b) const
{
    const Node& entry = nodes_[static_cast<std::size_t>(node)];
    const std::int64_t s = tree_.start(node);
    const std::int64_t t = tree_.end(node);
    const std::int64_t len = t - s;
    const JobRange range = entry.jobs;

    Cell best;
    best.guess = s;
    if (range.empty())
        return best;

    // Far-released jobs (r <= s - len) may only get deadline s or INF.
    const std::size_t split = std::max(range.first, jobs_released_in(instance_, 0, s - len + 1).last);
    LmProblem far;
    for (std::size_t q = range.first; q < split; ++q) {
        const Job& job = instance_.job(q);
        far.jobs.push_back({job.p, job.r, cell_cost(job, kInfinity, s, t)});
    }

    const std::int64_t a = s + len / 2;
    const std::int64_t left = 2 * node;
    const std::int64_t right = 2 * node + 1;
    const std::int64_t lowest = std::max(b, s - len);
    bool found = false;
    std::vector<std::int64_t> deadlines(range.size());
    // Larger guesses first so that cost ties keep the larger one.
    for (std::int64_t guess = s; guess >= lowest; --guess) {
        std::int64_t cost = 0;
        far.deadline = guess;
        const LmSolution split_far = lawler_moore(far, b);
        for (std::size_t k = 0; k < far.jobs.size(); ++k)
            deadlines[k] = split_far.on_time[k] ? s : kInfinity;
        cost += split_far.penalty;

        if (len == 1) {
            for (std::size_t q = split; q < range.last; ++q) {
                deadlines[q - range.first] = kInfinity;
                cost += cell_cost(instance_.job(q), kInfinity, s, t);
            }
        } else {
            const Node& left_node = nodes_[static_cast<std::size_t>(left)];
            const Node& right_node = nodes_[static_cast<std::size_t>(right)];
            const Cell& first = lookup(left, guess);
            const Cell& second = lookup(right, guess);
            for (std::size_t q = split; q < range.last; ++q) {
                const std::int64_t d2 = second.deadlines[q - right_node.jobs.first];
                std::int64_t d = d2;
                if (d2 <= a)
                    d = std::min(first.deadlines[q - left_node.jobs.first], a);
                deadlines[q - range.first] = d;
                cost += cell_cost(instance_.job(q), d, s, t);
            }
        }
        if (!found || cost < best.cost) {
            found = true;
            best.cost = cost;
            best.guess = guess;
            best.deadlines = deadlines;
        }
    }
    return best;
}

PseudoDp::CellView PseudoDp::cell(std::int64_t node, std::int64_t b) const
{
    const Node& entry = nodes_.at(static_cast<std::size_t>(node));
    const Cell& c = lookup(node, b);
    CellView view;
    view.s = tree_.start(node);
    view.t = tree_.end(node);
    view.b = b;
    view.b0 = entry.b0;
    view.jobs = entry.jobs;
    view.deadlines = c.deadlines;
    view.cost = c.cost;
    view.guess = c.guess;
    return view;
}

DeadlineAssignment PseudoDp::root_deadlines() const
{
    const CellView root = cell(1, 0);
    DeadlineAssignment out;
    out.d.assign(instance_.size(), kInfinity);
    for (std::size_t q = root.jobs.first; q < root.jobs.last; ++q)
        out.d[static_cast<std::size_t>(instance_.job(q).id)] = root.deadlines[q - root.jobs.first];
    return out;
}

std::int64_t PseudoDp::root_cost() const
{
    return lookup(1, 0).cost;
}

PseudoResult solve_pseudo(const Instance& instance, PseudoOptions options)
{
    PseudoDp dp(instance, options);
    dp.solve();
    PseudoResult result;
    result.deadlines = dp.root_deadlines().finalized(instance.horizon());
    EdfResult edf = edf_schedule(instance, result.deadlines);
    if (!edf.met_all_deadlines)
        throw std::logic_error("EDF missed a deadline produced by the DP");
    result.schedule = std::move(edf.schedule);
    result.objective = objective(instance, result.schedule, CostModel(Exponent(1), Rational(1)));
    result.root_cost = dp.root_cost();
    result.cells = dp.cell_count();
    return result;
}

} // namespace flowsched
