#pragma once

#include "flowsched/numeric.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsched {

/// Marks an infinite deadline or a machine that cannot process a job.
inline constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

struct Job {
    int id = -1;        ///< 0-based index in the input document
    std::int64_t p = 1; ///< processing time (single machine)
    std::int64_t r = 0; ///< release time
    std::int64_t w = 1; ///< weight
};

/// Machine-by-job processing times, indexed [machine][job id]; kInfinity for INF.
using MachineMatrix = std::vector<std::vector<std::int64_t>>;

class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver refused to run because its state or time budget would be exceeded.
class ResourceLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An immutable scheduling instance. Jobs are kept sorted by release time,
/// ties broken by id; ids are the positions in the input order.
class Instance {
public:
    /// Ids are assigned from the order of `jobs`; any id already set is ignored.
    explicit Instance(std::vector<Job> jobs);
    Instance(std::vector<Job> jobs, MachineMatrix machines);

    std::size_t size() const { return jobs_.size(); }
    /// Jobs in release order.
    std::span<const Job> jobs() const { return jobs_; }
    const Job& job(std::size_t position) const { return jobs_[position]; }
    const Job& job_by_id(int id) const { return jobs_[position_.at(static_cast<std::size_t>(id))]; }
    std::size_t position_of(int id) const { return position_.at(static_cast<std::size_t>(id)); }

    bool multi_machine() const { return machines_.has_value(); }
    std::size_t machine_count() const { return machines_ ? machines_->size() : 1; }
    const std::optional<MachineMatrix>& machines() const { return machines_; }
    /// p[i][j]; for single-machine instances machine 0 processes job j in p_j.
    std::int64_t processing(std::size_t machine, int id) const;

    /// Largest finite processing time over all machines.
    std::int64_t max_processing() const;
    std::int64_t max_release() const { return jobs_.back().r; }
    std::int64_t total_processing() const;

    /// Single machine: the smallest power of two strictly greater than
    /// max r + sum p. Multi-machine: max r + n * p_max.
    std::int64_t horizon() const { return horizon_; }

    friend bool operator==(const Instance& a, const Instance& b);

private:
    void check_and_index();

    std::vector<Job> jobs_;
    std::vector<std::size_t> position_;
    std::optional<MachineMatrix> machines_;
    std::int64_t horizon_ = 0;
};

/// Smallest power of two strictly greater than `value`.
std::int64_t next_power_of_two_above(std::int64_t value);

/// Per-job deadlines indexed by job id; kInfinity means unconstrained.
struct DeadlineAssignment {
    std::vector<std::int64_t> d;

    /// Copy with every infinite deadline replaced by `horizon`.
    DeadlineAssignment finalized(std::int64_t horizon) const;
    friend bool operator==(const DeadlineAssignment&, const DeadlineAssignment&) = default;
};

/// A piece of work: job `job` runs on `machine` during [start, end).
/// Times are integers in units of 1/time_scale.
struct Slot {
    std::size_t machine = 0;
    std::int64_t start = 0;
    std::int64_t end = 0;
    int job = 0;
    friend bool operator==(const Slot&, const Slot&) = default;
};

struct Schedule {
    std::int64_t time_scale = 1;
    std::vector<Slot> slots;

    /// End of the last slot of each job (in time_scale units), indexed by id; nullopt if unscheduled.
    std::vector<std::optional<std::int64_t>> completion_ticks(std::size_t job_count) const;
    /// Exact completion times C_j indexed by id. Requires every job to be scheduled.
    std::vector<Rational> completion_times(std::size_t job_count) const;
    /// Same schedule with the smallest time_scale that represents every endpoint.
    Schedule normalized() const;
    friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class ObjectiveMode { SumWeightedFlow, PNorm };

struct CostModel {
    Exponent p_norm{1};
    Rational epsilon{1};
    ObjectiveMode mode = ObjectiveMode::PNorm;

    CostModel() = default;
    CostModel(Exponent p, Rational eps, ObjectiveMode m = ObjectiveMode::PNorm);
    /// The exponent actually applied to flow times (1 for SumWeightedFlow).
    Exponent exponent() const { return mode == ObjectiveMode::SumWeightedFlow ? Exponent(1) : p_norm; }
};

struct Violation {
    std::string invariant; ///< e.g. "machine overlap"
    std::optional<std::size_t> machine;
    std::optional<int> job;
    std::optional<Rational> time;

    std::string describe() const;
};

struct ValidationReport {
    std::optional<Violation> violation;
    bool ok() const { return !violation.has_value(); }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(Violation v) : std::runtime_error(v.describe()), violation_(std::move(v)) {}
    const Violation& violation() const { return violation_; }

private:
    Violation violation_;
};

/// Checks every schedule invariant against the instance; reports the first violation.
ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule);

/// Sum of w_j * F_j^p (the 1/p root is not applied). Throws ValidationError
/// if the schedule is invalid.
Cost objective(const Instance& instance, const Schedule& schedule, const CostModel& model);

/// Sum of w_j * (C_j - r_j)^p for given completion times indexed by id.
Cost objective_from_completions(const Instance& instance, std::span<const Rational> completion,
                                const Exponent& p);

} // namespace flowsched
