#include "flowsched/gen.hpp"

#include <stdexcept>
#include <string>

namespace flowsched {

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("empty range");
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit)
        x = engine_();
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo)
        throw std::invalid_argument("empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Instance gen_random(const GenSpec& spec)
{
    if (spec.n < 1 || spec.p_max < 1 || spec.r_max < 0 || spec.w_max < 1 || spec.machines < 0 ||
        spec.inf_percent < 0 || spec.inf_percent > 100)
        throw std::invalid_argument("generator bounds out of range");
    Rng rng(spec.seed);
    std::vector<Job> jobs(static_cast<std::size_t>(spec.n));
    for (Job& job : jobs) {
        job.p = rng.between(1, spec.p_max);
        job.r = rng.between(0, spec.r_max);
        job.w = rng.between(1, spec.w_max);
    }
    if (spec.machines == 0)
        return Instance(std::move(jobs));

    const auto m = static_cast<std::size_t>(spec.machines);
    MachineMatrix matrix(m, std::vector<std::int64_t>(jobs.size()));
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        bool finite = false;
        for (std::size_t i = 0; i < m; ++i) {
            const std::int64_t p = rng.between(1, spec.p_max);
            const bool inf = rng.chance(static_cast<std::uint64_t>(spec.inf_percent), 100);
            matrix[i][j] = inf ? kInfinity : p;
            finite = finite || !inf;
        }
        if (!finite)
            matrix[rng.below(m)][j] = rng.between(1, spec.p_max);
        // The single-machine p of a multi-machine job is its fastest time.
        std::int64_t fastest = kInfinity;
        for (std::size_t i = 0; i < m; ++i)
            fastest = std::min(fastest, matrix[i][j]);
        jobs[j].p = fastest;
    }
    return Instance(std::move(jobs), std::move(matrix));
}

AdversarialKind parse_adversarial_kind(std::string_view name)
{
    if (name == "burst")
        return AdversarialKind::Burst;
    if (name == "geometric-weights")
        return AdversarialKind::GeometricWeights;
    if (name == "staircase-releases" || name == "staircase")
        return AdversarialKind::StaircaseReleases;
    throw std::invalid_argument("unknown instance family '" + std::string(name) + "'");
}

std::string_view adversarial_kind_name(AdversarialKind kind)
{
    switch (kind) {
    case AdversarialKind::Burst:
        return "burst";
    case AdversarialKind::GeometricWeights:
        return "geometric-weights";
    case AdversarialKind::StaircaseReleases:
        return "staircase-releases";
    }
    return "unknown";
}

Instance gen_adversarial(AdversarialKind kind, int n)
{
    if (n < 1 || n > 40)
        throw std::invalid_argument("family size must be between 1 and 40");
    std::vector<Job> jobs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Job& job = jobs[static_cast<std::size_t>(k)];
        switch (kind) {
        case AdversarialKind::Burst:
            job.p = std::int64_t{1} << k;
            break;
        case AdversarialKind::GeometricWeights:
            job.w = std::int64_t{1} << k;
            break;
        case AdversarialKind::StaircaseReleases:
            job.r = k;
            break;
        }
    }
    return Instance(std::move(jobs));
}

} // namespace flowsched
