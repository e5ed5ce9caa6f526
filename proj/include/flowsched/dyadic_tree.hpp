#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "flowsched/instance.hpp"

namespace flowsched {

/// Positions [first, last) of a run of jobs in release order.
struct JobRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t size() const { return last - first; }
    bool empty() const { return first == last; }
};

/// Dyadic intervals over [0, T) in heap order: node 1 is the root, node i has
/// children 2i (left half) and 2i+1 (right half).
class DyadicTree {
public:
    explicit DyadicTree(std::int64_t horizon);

    std::int64_t horizon() const { return horizon_; }
    int levels() const { return levels_; } ///< depth of the leaves
    std::int64_t node_count() const { return 2 * horizon_; }

    static int depth(std::int64_t node);
    std::int64_t length(std::int64_t node) const { return horizon_ >> depth(node); }
    std::int64_t start(std::int64_t node) const;
    std::int64_t end(std::int64_t node) const { return start(node) + length(node); }
    bool is_leaf(std::int64_t node) const { return length(node) == 1; }
    static bool is_root(std::int64_t node) { return node == 1; }
    static bool is_left(std::int64_t node) { return node > 1 && node % 2 == 0; }

    /// Earliest start b0: 0 for the root, max(0, s - 2len) for left children,
    /// max(0, s - 3len) for right children.
    std::int64_t earliest_start(std::int64_t node) const;

    /// J(s,t): for the root every job, otherwise the jobs released in
    /// (s' - len', t) where [s', s' + len') is the parent, so that a child never
    /// sees a job its parent treats as released long before s'.
    JobRange cell_jobs(const Instance& instance, std::int64_t node) const;

    /// Node whose interval is [s, s + len); len must be a power of two dividing s.
    std::int64_t node_of(std::int64_t s, std::int64_t len) const;

private:
    std::int64_t horizon_;
    int levels_ = 0;
};

/// Jobs with lo <= r < hi.
JobRange jobs_released_in(const Instance& instance, std::int64_t lo, std::int64_t hi);

} // namespace flowsched
