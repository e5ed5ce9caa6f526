#include "flowsched/dyadic_tree.hpp"

#include <algorithm>
#include <bit>

namespace flowsched {

DyadicTree::DyadicTree(std::int64_t horizon) : horizon_(horizon)
{
    if (horizon < 1 || !std::has_single_bit(static_cast<std::uint64_t>(horizon)))
        throw std::invalid_argument("dyadic tree horizon must be a power of two");
    levels_ = std::countr_zero(static_cast<std::uint64_t>(horizon));
}

int DyadicTree::depth(std::int64_t node)
{
    return 63 - std::countl_zero(static_cast<std::uint64_t>(node));
}

std::int64_t DyadicTree::start(std::int64_t node) const
{
    const int d = depth(node);
    return (node - (std::int64_t{1} << d)) * (horizon_ >> d);
}

std::int64_t DyadicTree::earliest_start(std::int64_t node) const
{
    if (is_root(node))
        return 0;
    const std::int64_t s = start(node);
    const std::int64_t len = length(node);
    return std::max<std::int64_t>(0, s - (is_left(node) ? 2 : 3) * len);
}

std::int64_t DyadicTree::node_of(std::int64_t s, std::int64_t len) const
{
    if (len < 1 || horizon_ % len != 0 || s % len != 0 || s < 0 || s + len > horizon_)
        throw std::invalid_argument("not a dyadic interval");
    const std::int64_t per_level = horizon_ / len;
    return per_level + s / len;
}

JobRange DyadicTree::cell_jobs(const Instance& instance, std::int64_t node) const
{
    if (is_root(node))
        return {0, instance.size()};
    const std::int64_t s = start(node);
    const std::int64_t len = length(node);
    // The parent's recent jobs: released after s_parent - len_parent.
    const std::int64_t after = s - (is_left(node) ? 2 : 3) * len;
    return jobs_released_in(instance, after + 1, end(node));
}

JobRange jobs_released_in(const Instance& instance, std::int64_t lo, std::int64_t hi)
{
    const auto jobs = instance.jobs();
    auto by_release = [](const Job& job, std::int64_t value) { return job.r < value; };
    const auto first = std::lower_bound(jobs.begin(), jobs.end(), lo, by_release);
    const auto last = std::lower_bound(first, jobs.end(), std::max(lo, hi), by_release);
    return {static_cast<std::size_t>(first - jobs.begin()), static_cast<std::size_t>(last - jobs.begin())};
}

} // namespace flowsched
