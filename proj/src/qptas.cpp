#include "flowsched/qptas.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

namespace flowsched {

namespace {

Real real_of(const Rational& value)
{
    return Cost(value).real();
}

std::int64_t to_int64(const Real& value)
{
    return value.convert_to<std::int64_t>();
}

/// Sorted values with every violating consecutive pair d < d' (d >= lo)
/// split until (d' - base) <= (1 + eps)(d - base).
template <typename Violates, typename Split>
void refine(std::vector<std::int64_t>& values, Violates violates, Split split)
{
    std::size_t k = 0;
    while (k + 1 < values.size()) {
        if (!violates(values[k], values[k + 1])) {
            ++k;
            continue;
        }
        std::vector<std::int64_t> extra = split(values[k], values[k + 1]);
        if (extra.empty())
            throw std::logic_error("cannot refine deadlines on this grid");
        values.insert(values.begin() + static_cast<std::ptrdiff_t>(k) + 1, extra.begin(), extra.end());
    }
}

} // namespace

std::int64_t qptas_horizon(const Instance& instance)
{
    return instance.max_release() + static_cast<std::int64_t>(instance.size()) * instance.max_processing();
}

DeadlineSets build_deadlines(const Instance& instance, const Rational& epsilon, std::int64_t ticks_per_unit)
{
    if (epsilon <= 0)
        throw std::invalid_argument("epsilon must be positive");
    if (ticks_per_unit < 1 || Rational(1, ticks_per_unit) > epsilon)
        throw std::invalid_argument("grid step must be at most epsilon");
    const std::size_t n = instance.size();
    const std::int64_t Q = ticks_per_unit;
    DeadlineSets out;
    out.ticks_per_unit = Q;
    out.horizon = qptas_horizon(instance);
    const Real eps = real_of(epsilon);

    // Real-valued sets first.
    std::vector<std::vector<Real>> raw(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Real r(instance.job(j).r);
        std::vector<Real> d{r, Real(r + 1)};
        if (j == 0) {
            d.emplace_back(out.horizon);
        } else {
            for (const Real& x : raw[j - 1])
                if (x >= r)
                    d.push_back(x);
        }
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        std::size_t k = 0;
        while (k + 1 < d.size()) {
            if (d[k] >= r + 1 && d[k + 1] - r > (1 + eps) * (d[k] - r)) {
                const Real mid = r + boost::multiprecision::sqrt(Real((d[k] - r) * (d[k + 1] - r)));
                d.insert(d.begin() + static_cast<std::ptrdiff_t>(k) + 1, mid);
                continue;
            }
            ++k;
        }
        raw[j] = std::move(d);
    }

    // Round to the grid, then repair any pair the rounding (or precision) left
    // too far apart, using exact integer arithmetic on ticks.
    const BigInt eps_num = boost::multiprecision::numerator(epsilon);
    const BigInt eps_den = boost::multiprecision::denominator(epsilon);
    out.ticks.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t base = instance.job(j).r * Q;
        std::set<std::int64_t> grid;
        for (const Real& x : raw[j]) {
            grid.insert(to_int64(boost::multiprecision::floor(x * Q)));
            grid.insert(to_int64(boost::multiprecision::ceil(x * Q)));
        }
        if (j > 0)
            for (const std::int64_t t : out.ticks[j - 1])
                if (t >= base)
                    grid.insert(t);
        std::vector<std::int64_t> values(grid.begin(), grid.end());
        refine(
            values,
            [&](std::int64_t d, std::int64_t next) {
                if (d < base + Q)
                    return false;
                return BigInt(next - base) * eps_den > (eps_den + eps_num) * BigInt(d - base);
            },
            [&](std::int64_t d, std::int64_t next) {
                const BigInt product = BigInt(d - base) * BigInt(next - base);
                const auto root = static_cast<std::int64_t>(boost::multiprecision::sqrt(product));
                std::vector<std::int64_t> extra;
                for (const std::int64_t t : {base + root, base + root + 1})
                    if (t > d && t < next && (extra.empty() || extra.back() != t))
                        extra.push_back(t);
                return extra;
            });
        out.ticks[j] = std::move(values);
    }
    return out;
}

namespace {

/// Comparable DP cost: exact (scaled by Q^p) for integer p, else long double.
struct Charge {
    __int128 exact = 0;
    long double approx = 0;
};

struct Use {
    std::uint16_t interval = 0;
    std::uint8_t busy = 0;    ///< machines running later jobs in these slots
    std::uint8_t machine = 0; ///< machine running this job
    std::int32_t count = 0;
};

struct State {
    Charge cost;
    std::uint32_t pred = 0;
    std::vector<Use> alloc;
};

struct KeyHash {
    std::size_t operator()(const std::vector<std::int32_t>& key) const
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (const std::int32_t v : key) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

__int128 checked_power(std::int64_t base, int exponent, std::int64_t weight)
{
    BigInt value = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent)) * weight;
    static const BigInt limit = BigInt(1) << 120;
    if (value > limit)
        throw ResourceLimitExceeded("objective values too large for the exact DP cost");
    const BigInt low_mask = (BigInt(1) << 64) - 1;
    const auto high = static_cast<std::uint64_t>(value >> 64);
    const auto low = static_cast<std::uint64_t>(value & low_mask);
    return static_cast<__int128>((static_cast<unsigned __int128>(high) << 64) | low);
}

/// Cheapest charge over a few list-scheduling priority rules on the δ-grid:
/// every slot, released unfinished jobs in priority order take the free
/// machine doing the most work for them.
template <typename Less>
std::optional<Charge> list_schedule_bound(const Instance& instance, const DeadlineSets& D, std::int64_t U, bool migration,
                                          const std::vector<std::vector<Charge>>& charge, Less less)
{
    const std::size_t n = instance.size();
    const std::size_t m = instance.machine_count();
    const std::int64_t Q = D.ticks_per_unit;
    const std::int64_t need = Q * U;
    const std::int64_t end = D.horizon * Q;
    auto work_on = [&](std::size_t i, std::size_t j) {
        const std::int64_t pij = instance.processing(i, instance.job(j).id);
        return pij == kInfinity ? std::int64_t{0} : U / pij;
    };
    std::vector<std::int64_t> best_work(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            best_work[j] = std::max(best_work[j], work_on(i, j));

    std::vector<std::vector<std::size_t>> orders(3);
    for (auto& order : orders) {
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    // Weight per slot needed, then shortest first; the third is release order.
    std::stable_sort(orders[0].begin(), orders[0].end(), [&](std::size_t a, std::size_t b) {
        return instance.job(a).w * best_work[a] > instance.job(b).w * best_work[b];
    });
    std::stable_sort(orders[1].begin(), orders[1].end(),
                     [&](std::size_t a, std::size_t b) { return best_work[a] > best_work[b]; });

    std::optional<Charge> best;
    for (const auto& order : orders) {
        std::vector<std::int64_t> done(n, 0);
        std::vector<int> home(n, -1);
        std::vector<std::int64_t> last(n, -1);
        std::size_t finished = 0;
        for (std::int64_t tick = 0; tick < end && finished < n; ++tick) {
            std::vector<bool> taken(m, false);
            for (const std::size_t j : order) {
                if (last[j] >= 0 || instance.job(j).r * Q > tick)
                    continue;
                int pick = -1;
                for (std::size_t i = 0; i < m; ++i) {
                    if (taken[i] || work_on(i, j) == 0 || (!migration && home[j] >= 0 && home[j] != static_cast<int>(i)))
                        continue;
                    if (pick < 0 || work_on(i, j) > work_on(static_cast<std::size_t>(pick), j))
                        pick = static_cast<int>(i);
                }
                if (pick < 0)
                    continue;
                taken[static_cast<std::size_t>(pick)] = true;
                home[j] = pick;
                done[j] += work_on(static_cast<std::size_t>(pick), j);
                if (done[j] >= need) {
                    last[j] = tick;
                    ++finished;
                }
            }
        }
        if (finished < n)
            continue;
        Charge total;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& ticks = D.ticks[j];
            const auto l = static_cast<std::size_t>(std::upper_bound(ticks.begin(), ticks.end(), last[j]) - ticks.begin()) - 1;
            total.exact += charge[j][l].exact;
            total.approx += charge[j][l].approx;
        }
        if (!best || less(total, *best))
            best = total;
    }
    return best;
}

} // namespace

QptasResult solve_qptas(const Instance& instance, const CostModel& model, const QptasOptions& options)
{
    const std::size_t n = instance.size();
    const std::size_t m = instance.machine_count();
    if (m > 3)
        throw std::invalid_argument("the QPTAS supports at most 3 machines");
    if (model.epsilon <= 0)
        throw std::invalid_argument("epsilon must be positive");
    const Exponent p = model.exponent();
    const bool exact = p.is_integer();

    QptasResult result;
    // Use ε' = 1/ceil(1/ε) <= ε so that 1/ε' is an integer.
    const BigInt inverse = (boost::multiprecision::numerator(Rational(1 / model.epsilon)) +
                            boost::multiprecision::denominator(Rational(1 / model.epsilon)) - 1) /
                           boost::multiprecision::denominator(Rational(1 / model.epsilon));
    result.epsilon = Rational(1, inverse.convert_to<std::int64_t>());
    std::int64_t Q = inverse.convert_to<std::int64_t>();
    for (std::size_t k = 0; k < m; ++k)
        Q *= static_cast<std::int64_t>(n);
    if (options.ticks_per_unit)
        Q = *options.ticks_per_unit;
    result.delta = Rational(1, Q);
    result.deadlines = build_deadlines(instance, result.epsilon, Q);
    const DeadlineSets& D = result.deadlines;
    const std::int64_t total_ticks = D.horizon * Q;
    if (total_ticks > std::numeric_limits<std::int32_t>::max())
        throw ResourceLimitExceeded("too many grid slots");

    // Work is counted in units of 1/(Q U): a slot on machine i does U / p_ij.
    std::int64_t U = 1;
    for (std::size_t i = 0; i < m; ++i)
        for (const Job& job : instance.jobs()) {
            const std::int64_t pij = instance.processing(i, job.id);
            if (pij != kInfinity)
                U = std::lcm(U, pij);
        }
    const std::int64_t need = Q * U;

    const int subsets = (1 << m) - 1; // nonempty machine sets; index = mask - 1
    auto slot_of = [subsets](std::size_t l, int mask) { return l * static_cast<std::size_t>(subsets) + static_cast<std::size_t>(mask - 1); };

    // Charge of job j when its last used interval is l.
    std::vector<std::vector<Charge>> charge(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Job& job = instance.job(j);
        for (std::size_t l = 0; l < D.interval_count(j); ++l) {
            const std::int64_t flow = D.ticks[j][l + 1] - job.r * Q;
            Charge c;
            if (exact)
                c.exact = checked_power(flow, p.num(), job.w);
            c.approx = Cost::power(Rational(flow, Q), p, job.w).real().convert_to<long double>();
            charge[j].push_back(c);
        }
    }
    auto less = [exact](const Charge& a, const Charge& b) { return exact ? a.exact < b.exact : a.approx < b.approx; };
    auto add = [](Charge a, const Charge& b) {
        a.exact += b.exact;
        a.approx += b.approx;
        return a;
    };
    // Pruning test; the approximate costs get a little room for rounding.
    auto exceeds = [exact](const Charge& a, const Charge& bound) {
        return exact ? a.exact > bound.exact : a.approx > bound.approx * (1 + 1e-12L) + 1e-12L;
    };

    // Upper bound from list schedules on the same grid (dropping unneeded slots
    // never raises a charge), and per-job lower bounds from the fastest machine.
    std::vector<std::int64_t> fastest(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            const std::int64_t pij = instance.processing(i, instance.job(j).id);
            if (pij != kInfinity)
                fastest[j] = std::max(fastest[j], U / pij);
        }
    std::vector<Charge> lower_prefix(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t least = (need + fastest[j] - 1) / fastest[j];
        std::size_t l = 0;
        while (D.ticks[j][l + 1] - instance.job(j).r * Q < least)
            ++l;
        lower_prefix[j + 1] = add(lower_prefix[j], charge[j][l]);
    }
    std::optional<Charge> upper;
    if (options.bound_pruning)
        upper = list_schedule_bound(instance, D, U, options.migration, charge, less);

    QptasStats& stats = result.stats;
    std::vector<std::vector<State>> levels(n + 1);
    levels[n].push_back(State{});
    std::vector<std::vector<std::int32_t>> previous_keys(1, std::vector<std::int32_t>(D.interval_count(n - 1) * subsets, 0));
    std::size_t stored = 0;
    std::uint32_t best_final = 0;

    for (std::size_t jj = n; jj-- > 0;) {
        const std::size_t j = jj;
        const Job& job = instance.job(j);
        const std::size_t K = D.interval_count(j);

        // Where each interval of job j sits among the intervals of job j-1.
        std::vector<std::size_t> parent(K, 0);
        std::size_t parent_count = 0;
        if (j > 0) {
            const auto& up = D.ticks[j - 1];
            parent_count = D.interval_count(j - 1);
            std::vector<std::int64_t> covered(parent_count, 0);
            for (std::size_t l = 0; l < K; ++l) {
                const auto it = std::upper_bound(up.begin(), up.end(), D.ticks[j][l]);
                parent[l] = static_cast<std::size_t>(it - up.begin()) - 1;
                if (parent[l] >= parent_count || D.ticks[j][l + 1] > up[parent[l] + 1])
                    throw std::logic_error("deadline sets are not hierarchical");
                covered[parent[l]] += D.slots(j, l);
            }
            const std::int64_t from = job.r * Q;
            for (std::size_t pl = 0; pl < parent_count; ++pl) {
                const std::int64_t lo = std::max(up[pl], from);
                const std::int64_t expect = std::max<std::int64_t>(0, up[pl + 1] - lo);
                if (covered[pl] != expect)
                    throw std::logic_error("intervals of consecutive jobs do not subdivide");
            }
        }

        std::vector<int> machines;
        for (std::size_t i = 0; i < m; ++i)
            if (instance.processing(i, job.id) != kInfinity)
                machines.push_back(static_cast<int>(i));
        std::vector<std::int64_t> unit_work(m, 0);
        for (const int i : machines)
            unit_work[static_cast<std::size_t>(i)] = U / instance.processing(static_cast<std::size_t>(i), job.id);

        // Guess items in lexicographic order (machine group, interval, busy set, machine).
        struct Item {
            std::uint16_t interval;
            std::uint8_t busy;
            std::uint8_t machine;
        };
        std::vector<std::vector<Item>> groups;
        auto items_for = [&](const std::vector<int>& allowed) {
            std::vector<Item> items;
            for (std::size_t l = 0; l < K; ++l)
                for (int busy = 0; busy <= subsets; ++busy)
                    for (const int i : allowed)
                        if ((busy & (1 << i)) == 0)
                            items.push_back({static_cast<std::uint16_t>(l), static_cast<std::uint8_t>(busy),
                                             static_cast<std::uint8_t>(i)});
            return items;
        };
        if (options.migration) {
            groups.push_back(items_for(machines));
        } else {
            for (const int i : machines)
                groups.push_back(items_for({i}));
        }

        std::unordered_map<std::vector<std::int32_t>, std::uint32_t, KeyHash> index;
        std::vector<State> states;
        std::vector<std::vector<std::int32_t>> keys;
        bool have_final = false;
        Charge final_cost;

        const std::vector<State>& below = levels[j + 1];
        for (std::uint32_t pi = 0; pi < below.size(); ++pi) {
            const std::vector<std::int32_t>& residual = previous_keys[pi];
            // Slots of each (interval, busy set) still available to job j.
            std::vector<std::int64_t> avail(K * static_cast<std::size_t>(subsets + 1), 0);
            for (std::size_t l = 0; l < K; ++l) {
                std::int64_t used = 0;
                for (int mask = 1; mask <= subsets; ++mask) {
                    const std::int32_t v = residual[slot_of(l, mask)];
                    avail[l * static_cast<std::size_t>(subsets + 1) + static_cast<std::size_t>(mask)] = v;
                    used += v;
                }
                if (used > D.slots(j, l))
                    throw std::logic_error("load vector exceeds interval capacity");
                avail[l * static_cast<std::size_t>(subsets + 1)] = D.slots(j, l) - used;
            }
            auto avail_at = [&](const Item& item) -> std::int64_t& {
                return avail[static_cast<std::size_t>(item.interval) * static_cast<std::size_t>(subsets + 1) + item.busy];
            };

            // Latest interval job j may end in without exceeding the upper bound.
            std::size_t allowed = K;
            if (upper) {
                const Charge floor = add(below[pi].cost, lower_prefix[j]);
                allowed = 0;
                while (allowed < K && !exceeds(add(floor, charge[j][allowed]), *upper))
                    ++allowed;
            }
            for (const auto& all_items : groups) {
                std::vector<Item> items;
                for (const Item& item : all_items)
                    if (item.interval < allowed)
                        items.push_back(item);
                // Upper bound on the work the items from k on can still add.
                std::vector<std::int64_t> reach(items.size() + 1, 0);
                for (std::size_t k = items.size(); k-- > 0;)
                    reach[k] = reach[k + 1] + avail_at(items[k]) * unit_work[items[k].machine];
                std::vector<std::int32_t> counts(items.size(), 0);

                auto emit = [&]() {
                    ++stats.transitions;
                    std::int64_t work = 0;
                    std::vector<Use> alloc;
                    std::size_t last = 0;
                    for (std::size_t k = 0; k < items.size(); ++k) {
                        if (counts[k] == 0)
                            continue;
                        work += counts[k] * unit_work[items[k].machine];
                        alloc.push_back({items[k].interval, items[k].busy, items[k].machine, counts[k]});
                        last = std::max<std::size_t>(last, items[k].interval);
                    }
                    ++stats.completion_checks;
                    if (work < need)
                        throw std::logic_error("guess does not complete the job");
                    for (const Use& use : alloc)
                        if (work - unit_work[use.machine] >= need)
                            return; // not minimal: some slot can be dropped

                    std::vector<std::int32_t> load = residual;
                    for (const Use& use : alloc) {
                        const int after = use.busy | (1 << use.machine);
                        load[slot_of(use.interval, after)] += use.count;
                        if (use.busy != 0)
                            load[slot_of(use.interval, use.busy)] -= use.count;
                    }
                    // L'(I,S) = L(I,S) - Σ_{i∈S} y(I,S,i) + Σ_{i∉S} y(I,S∪{i},i)
                    for (std::size_t l = 0; l < K; ++l)
                        for (int mask = 1; mask <= subsets; ++mask) {
                            std::int64_t value = load[slot_of(l, mask)];
                            for (const Use& use : alloc) {
                                if (use.interval != l)
                                    continue;
                                const int with = use.busy | (1 << use.machine);
                                if (with == mask)
                                    value -= use.count;
                                if (use.busy == mask)
                                    value += use.count;
                            }
                            if (value != residual[slot_of(l, mask)] || load[slot_of(l, mask)] < 0)
                                throw std::logic_error("residual load identity violated");
                        }
                    ++stats.residual_checks;

                    const Charge cost = add(below[pi].cost, charge[j][last]);
                    if (j == 0) {
                        if (!have_final || less(cost, final_cost)) {
                            have_final = true;
                            final_cost = cost;
                            states.assign(1, State{cost, pi, alloc});
                            best_final = 0;
                        }
                        return;
                    }
                    // Coarsen to the intervals of job j-1.
                    std::vector<std::int32_t> key(parent_count * static_cast<std::size_t>(subsets), 0);
                    std::int64_t total_fine = 0;
                    std::int64_t total_coarse = 0;
                    for (std::size_t l = 0; l < K; ++l)
                        for (int mask = 1; mask <= subsets; ++mask) {
                            key[slot_of(parent[l], mask)] += load[slot_of(l, mask)];
                            total_fine += load[slot_of(l, mask)];
                        }
                    for (std::size_t pl = 0; pl < parent_count; ++pl) {
                        std::int64_t used = 0;
                        for (int mask = 1; mask <= subsets; ++mask)
                            used += key[slot_of(pl, mask)];
                        total_coarse += used;
                        if (used > D.slots(j - 1, pl))
                            throw std::logic_error("coarsened load exceeds interval capacity");
                    }
                    if (total_fine != total_coarse)
                        throw std::logic_error("subdivision identity violated");
                    ++stats.subdivision_checks;

                    const auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(states.size()));
                    if (inserted) {
                        states.push_back(State{cost, pi, std::move(alloc)});
                        keys.push_back(std::move(key));
                        if (++stored > options.state_budget)
                            throw ResourceLimitExceeded("QPTAS state budget of " + std::to_string(options.state_budget) +
                                                        " cells exceeded");
                    } else if (less(cost, states[it->second].cost)) {
                        states[it->second] = State{cost, pi, std::move(alloc)};
                    }
                };

                std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t k, std::int64_t work) {
                    if (work >= need) {
                        emit();
                        return;
                    }
                    if (k == items.size() || work + reach[k] < need)
                        return;
                    const Item& item = items[k];
                    const std::int64_t u = unit_work[item.machine];
                    std::int64_t& room = avail_at(item);
                    const std::int64_t most = std::min(room, (need - work + u - 1) / u);
                    for (std::int64_t c = 0; c <= most; ++c) {
                        counts[k] = static_cast<std::int32_t>(c);
                        room -= c;
                        walk(k + 1, work + c * u);
                        room += c;
                    }
                    counts[k] = 0;
                };
                walk(0, 0);
            }
        }
        if (states.empty())
            throw std::logic_error("no feasible guess for job " + std::to_string(job.id));
        stats.cells += states.size();
        levels[j] = std::move(states);
        previous_keys = std::move(keys);
    }

    // Recover each job's guesses, then place them on concrete slots from the last job back.
    std::vector<const State*> chosen(n);
    std::uint32_t at = best_final;
    for (std::size_t j = 0; j < n; ++j) {
        chosen[j] = &levels[j][at];
        at = chosen[j]->pred;
    }

    Schedule schedule;
    schedule.time_scale = Q * U;
    std::vector<std::uint8_t> busy(static_cast<std::size_t>(total_ticks), 0);
    std::vector<std::uint8_t> mine(static_cast<std::size_t>(total_ticks), 0);
    for (std::size_t jj = n; jj-- > 0;) {
        const Job& job = instance.job(jj);
        const auto& ticks = D.ticks[jj];
        std::vector<std::pair<std::int64_t, int>> picks;
        for (const Use& use : chosen[jj]->alloc) {
            std::int32_t left = use.count;
            for (std::int64_t k = ticks[use.interval]; k < ticks[use.interval + 1] && left > 0; ++k) {
                const auto slot = static_cast<std::size_t>(k);
                if (busy[slot] == use.busy && !mine[slot]) {
                    mine[slot] = 1;
                    picks.emplace_back(k, use.machine);
                    --left;
                }
            }
            if (left > 0)
                throw std::logic_error("guessed slots are not available");
        }
        std::sort(picks.begin(), picks.end());
        std::int64_t work = 0;
        for (std::size_t k = 0; k < picks.size(); ++k) {
            const auto [tick, machine] = picks[k];
            const auto slot = static_cast<std::size_t>(tick);
            mine[slot] = 0;
            busy[slot] = static_cast<std::uint8_t>(busy[slot] | (1 << machine));
            const std::int64_t pij = instance.processing(static_cast<std::size_t>(machine), job.id);
            const std::int64_t u = U / pij;
            std::int64_t length = U;
            if (work + u >= need) {
                length = (need - work) * pij;
                if (k + 1 != picks.size())
                    throw std::logic_error("job completes before its last guessed slot");
            }
            work += u;
            schedule.slots.push_back({static_cast<std::size_t>(machine), tick * U, tick * U + length, job.id});
        }
    }
    std::sort(schedule.slots.begin(), schedule.slots.end(), [](const Slot& a, const Slot& b) {
        return std::tie(a.machine, a.start) < std::tie(b.machine, b.start);
    });
    result.schedule = std::move(schedule);
    result.objective = objective(instance, result.schedule, model);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t last = 0;
        for (const Use& use : chosen[j]->alloc)
            last = std::max<std::size_t>(last, use.interval);
        const Job& job = instance.job(j);
        result.charged_cost += Cost::power(Rational(D.ticks[j][last + 1] - job.r * Q, Q), p, job.w);
    }
    return result;
}

} // namespace flowsched
