#pragma once

#include "flowsched/instance.hpp"

#include <random>
#include <string_view>

namespace flowsched {

/// mt19937_64 with bounded draws by rejection sampling. The engine is fully
/// specified by the C++ standard and the draw routine is our own, so a seed
/// reproduces the same numbers on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);
    /// True with probability num/den.
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

private:
    std::mt19937_64 engine_;
};

struct GenSpec {
    int n = 5;
    std::int64_t p_max = 4;
    std::int64_t r_max = 4;
    std::int64_t w_max = 4;
    int machines = 0;            ///< 0: single-machine instance without a matrix
    int inf_percent = 0;         ///< chance (in percent) of an INF matrix entry
    std::uint64_t seed = 1;
};

/// Independent uniform draws within the bounds. Every job keeps at least one
/// finite machine entry.
Instance gen_random(const GenSpec& spec);

enum class AdversarialKind { Burst, GeometricWeights, StaircaseReleases };

AdversarialKind parse_adversarial_kind(std::string_view name);
std::string_view adversarial_kind_name(AdversarialKind kind);

/// burst: r = 0, p = 1, 2, 4, ...;  geometric-weights: r = 0, p = 1,
/// w = 1, 2, 4, ...;  staircase-releases: r = 0, 1, 2, ..., p = 1.
Instance gen_adversarial(AdversarialKind kind, int n);

} // namespace flowsched
