#include "cli.hpp"

#include "flowsched/dp_poly.hpp"
#include "flowsched/dp_pseudo.hpp"
#include "flowsched/edf.hpp"
#include "flowsched/gen.hpp"
#include "flowsched/io.hpp"
#include "flowsched/lawler_moore.hpp"
#include "flowsched/oracle.hpp"
#include "flowsched/qptas.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

namespace flowsched::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string algo = "pseudo";
    std::string instance_path;
    std::string deadlines_path;
    std::string out_path;
    std::string p_text = "1";
    std::string epsilon_text = "1";
    std::string migration = "on";
    std::size_t state_budget = 10'000'000;
    std::int64_t ticks_per_unit = 0; ///< 0: the solver's default grid
    int threads = 1;
    bool oracle = false;
};

/// One algorithm run, already validated.
struct Outcome {
    std::string algo;
    Schedule schedule;
    Cost objective;
    std::size_t cells = 0;
    std::vector<std::pair<std::string, std::string>> details;
    std::int64_t grid = 1; ///< grid a multi-machine oracle should use for a like-for-like ratio
    bool migration = true;
    std::optional<EdfResult> edf;
};

Exponent parse_p(const std::string& text)
{
    Exponent p;
    try {
        p = Exponent::parse(text);
    } catch (const std::exception& e) {
        throw UsageError("--p: " + std::string(e.what()));
    }
    if (p.num() < 1 || p.num() > 8 || p.den() < 1 || p.den() > 8)
        throw UsageError("--p must be u/v with 1 <= u, v <= 8");
    return p;
}

Rational parse_epsilon(const std::string& text)
{
    Rational eps;
    try {
        eps = parse_rational(text);
    } catch (const std::exception& e) {
        throw UsageError("--epsilon: " + std::string(e.what()));
    }
    if (eps <= 0)
        throw UsageError("--epsilon must be positive");
    return eps;
}

CostModel model_of(const Settings& s)
{
    return CostModel(parse_p(s.p_text), parse_epsilon(s.epsilon_text));
}

bool migration_of(const Settings& s)
{
    if (s.migration == "on")
        return true;
    if (s.migration == "off")
        return false;
    throw UsageError("--migration must be on or off");
}

Instance load_instance(const std::string& path)
{
    if (path.empty())
        throw UsageError("--instance is required");
    return read_instance(read_file(path));
}

std::string exact_and_decimal(const Cost& value)
{
    if (value.exact())
        return value.str() + " (" + value.decimal(6) + ")";
    return value.decimal(6);
}

Outcome run_algorithm(const Instance& inst, const std::string& algo, const Settings& s, const CostModel& model)
{
    Outcome out;
    out.algo = algo;
    out.migration = migration_of(s);
    if (algo == "edf") {
        if (s.deadlines_path.empty())
            throw UsageError("--algo edf needs --deadlines");
        EdfResult r = edf_schedule(inst, read_deadlines(read_file(s.deadlines_path)));
        out.schedule = r.schedule;
        out.details.emplace_back("deadlines met", r.met_all_deadlines ? "yes" : "no");
        out.edf = std::move(r);
    } else if (algo == "pseudo") {
        if (model.exponent() != Exponent(1))
            throw UsageError("pseudo minimizes total weighted flow time; use --p 1");
        PseudoOptions options;
        options.threads = s.threads;
        PseudoResult r = solve_pseudo(inst, options);
        out.schedule = std::move(r.schedule);
        out.cells = r.cells;
        out.details.emplace_back("root cell cost", std::to_string(r.root_cost));
    } else if (algo == "poly") {
        PolyOptions options;
        options.threads = s.threads;
        PolyResult r = solve_poly(inst, model, options);
        out.schedule = std::move(r.schedule);
        out.cells = r.intervals;
        out.details.emplace_back("root budget", exact_and_decimal(r.root_budget) + ", " +
                                                    std::to_string(r.root_budget_units) + " units");
        out.details.emplace_back("budget grid", "0.." + std::to_string(r.grid_cap) + " of " +
                                                    std::to_string(r.grid_max) + " units" +
                                                    (r.used_full_grid ? " (full grid)" : ""));
        out.details.emplace_back("intervals", std::to_string(r.intervals));
    } else if (algo == "qptas") {
        if (inst.machine_count() > 3)
            throw UsageError("qptas handles at most 3 machines");
        QptasOptions options;
        options.migration = out.migration;
        options.state_budget = s.state_budget;
        if (s.ticks_per_unit > 0)
            options.ticks_per_unit = s.ticks_per_unit;
        QptasResult r = solve_qptas(inst, model, options);
        out.schedule = std::move(r.schedule);
        out.cells = r.stats.cells;
        out.grid = r.deadlines.ticks_per_unit;
        out.details.emplace_back("epsilon used", to_string(r.epsilon));
        out.details.emplace_back("delta", to_string(r.delta));
        out.details.emplace_back("charged cost", exact_and_decimal(r.charged_cost));
        out.details.emplace_back("transitions", std::to_string(r.stats.transitions));
    } else if (algo == "oracle") {
        OracleResult r = inst.multi_machine()
                             ? oracle_multi(inst, model, s.ticks_per_unit > 0 ? s.ticks_per_unit : 1, out.migration)
                             : oracle_single(inst, model);
        out.schedule = std::move(r.schedule);
        out.cells = r.states;
        out.grid = s.ticks_per_unit > 0 ? s.ticks_per_unit : 1;
    } else {
        throw UsageError("unknown algorithm '" + algo + "' (edf, pseudo, poly, qptas, oracle)");
    }
    const ValidationReport report = validate_schedule(inst, out.schedule);
    if (!report.ok())
        throw ValidationError(*report.violation);
    out.objective = objective(inst, out.schedule, model);
    return out;
}

Cost oracle_for(const Instance& inst, const CostModel& model, const Outcome& outcome)
{
    if (inst.multi_machine())
        return oracle_multi(inst, model, outcome.grid, outcome.migration).objective;
    return oracle_single(inst, model).objective;
}

/// objective / oracle, exact when both are.
std::string ratio_text(const Cost& value, const Cost& best)
{
    if (best == Cost(Rational(0)))
        return value == best ? "1" : "inf";
    if (value.exact() && best.exact()) {
        const Rational q = value.rational() / best.rational();
        return to_string(q) + " (" + to_decimal(q, 6) + ")";
    }
    return to_decimal(Real(value.real() / best.real()), 6);
}

double ratio_value(const Cost& value, const Cost& best)
{
    if (best == Cost(Rational(0)))
        return value == best ? 1.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(Real(value.real() / best.real()));
}

/// Maps an exception to an exit code and prints it.
int report_failure(std::ostream& err)
{
    try {
        throw;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const FileError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceLimitExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kResource;
    } catch (const ValidationError& e) {
        err << "internal error: schedule failed validation: " << e.what() << "\n";
        return kInternal;
    } catch (const InvalidInstance& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

class Stopwatch {
public:
    double millis() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void add_model_options(CLI::App& cmd, Settings& s)
{
    cmd.add_option("--p", s.p_text, "exponent p = u/v of the p-norm (u, v <= 8)");
    cmd.add_option("--epsilon", s.epsilon_text, "accuracy parameter");
    cmd.add_option("--migration", s.migration, "qptas/oracle: on or off");
    cmd.add_option("--ticks-per-unit", s.ticks_per_unit, "qptas/oracle: grid step 1/N (default: solver's own)");
    cmd.add_option("--state-budget", s.state_budget, "qptas: refuse after this many DP states");
    cmd.add_option("--threads", s.threads, "worker threads");
}

int cmd_solve(const Settings& s, std::ostream& out, std::ostream& err)
{
    const Instance inst = load_instance(s.instance_path);
    const CostModel model = model_of(s);
    const Stopwatch clock;
    const Outcome o = run_algorithm(inst, s.algo, s, model);
    const double solve_ms = clock.millis();

    out << "algo: " << o.algo << "\n";
    out << "jobs: " << inst.size() << "\n";
    out << "machines: " << inst.machine_count() << "\n";
    out << "p: " << model.exponent().str() << "\n";
    out << "epsilon: " << to_string(model.epsilon) << "\n";
    out << "objective: " << o.objective.str() << "\n";
    out << "objective (decimal): " << o.objective.decimal(6) << "\n";
    if (model.exponent() != Exponent(1))
        out << "p-norm: " << to_decimal(o.objective.root(model.exponent()), 6) << "\n";
    for (const auto& [key, value] : o.details)
        out << key << ": " << value << "\n";
    out << "cells: " << o.cells << "\n";
    out << "schedule: valid\n";
    if (s.oracle) {
        const Cost best = oracle_for(inst, model, o);
        out << "oracle: " << exact_and_decimal(best) << "\n";
        out << "ratio: " << ratio_text(o.objective, best) << "\n";
        if (model.exponent() != Exponent(1) && best > Cost(Rational(0))) {
            const Real norm = real_pow(Real(o.objective.real() / best.real()),
                                       Exponent(model.exponent().den(), model.exponent().num()));
            out << "p-norm ratio: " << to_decimal(norm, 6) << "\n";
        }
    }
    if (!s.out_path.empty())
        write_file(s.out_path, write_schedule(o.schedule.normalized()));
    err << "time: " << to_decimal(Rational(static_cast<std::int64_t>(solve_ms * 1000), 1000), 3) << " ms\n";
    if (o.edf && !o.edf->met_all_deadlines)
        return kNegative;
    return kOk;
}

int cmd_edf(const Settings& s, std::ostream& out)
{
    const Instance inst = load_instance(s.instance_path);
    if (s.deadlines_path.empty())
        throw UsageError("--deadlines is required");
    const DeadlineAssignment d = read_deadlines(read_file(s.deadlines_path));
    const EdfResult r = edf_schedule(inst, d);
    const ValidationReport report = validate_schedule(inst, r.schedule);
    if (!report.ok())
        throw ValidationError(*report.violation);
    out << write_schedule(r.schedule.normalized()) << "\n";
    out << "density test: " << (density_feasible(inst, d) ? "feasible" : "infeasible") << "\n";
    if (r.met_all_deadlines) {
        out << "verdict: all deadlines met\n";
    } else {
        const DeadlineMiss& miss = *r.first_violation;
        out << "verdict: job " << miss.job << " misses deadline " << miss.deadline << " (completes at "
            << miss.completion << ")\n";
    }
    if (!s.out_path.empty())
        write_file(s.out_path, write_schedule(r.schedule.normalized()));
    return r.met_all_deadlines ? kOk : kNegative;
}

int cmd_validate(const Settings& s, const std::string& schedule_path, std::ostream& out)
{
    const Instance inst = load_instance(s.instance_path);
    if (schedule_path.empty())
        throw UsageError("--schedule is required");
    const Schedule schedule = read_schedule(read_file(schedule_path));
    const ValidationReport report = validate_schedule(inst, schedule);
    if (!report.ok()) {
        out << "invalid: " << report.violation->describe() << "\n";
        return kNegative;
    }
    const CostModel model = model_of(s);
    out << "valid\n";
    out << "objective: " << exact_and_decimal(objective(inst, schedule, model)) << "\n";
    return kOk;
}

int cmd_lm(const Settings& s, std::int64_t deadline, std::int64_t start, std::optional<std::int64_t> budget,
           std::ostream& out)
{
    const Instance inst = load_instance(s.instance_path);
    if (inst.multi_machine())
        throw UsageError("lm works on single-machine instances");
    LmProblem problem;
    problem.deadline = deadline;
    for (const Job& job : inst.jobs())
        problem.jobs.push_back({job.p, job.r, job.w});
    auto print = [&](const LmSolution& sol) {
        for (std::size_t k = 0; k < problem.jobs.size(); ++k)
            out << "job " << inst.job(k).id << ": " << (sol.on_time[k] ? "on time" : "late") << "\n";
        out << "penalty: " << sol.penalty << "\n";
        out << "start: " << sol.start << "\n";
    };
    if (budget) {
        const auto sol = lm_latest_start(problem, *budget);
        if (!sol) {
            out << "latest start: none (budget too small)\n";
            return kNegative;
        }
        out << "latest start: " << sol->start << "\n";
        print(*sol);
        return kOk;
    }
    print(lawler_moore(problem, start));
    return kOk;
}

struct CompareRow {
    std::string algo;
    std::optional<Cost> objective;
    std::string error;
    std::size_t cells = 0;
};

int cmd_compare(const Settings& s, std::vector<std::string> algos, std::ostream& out, std::ostream& err)
{
    const Instance inst = load_instance(s.instance_path);
    const CostModel model = model_of(s);
    if (algos.empty()) {
        if (inst.multi_machine())
            algos = {"qptas", "oracle"};
        else if (model.exponent() == Exponent(1))
            algos = {"pseudo", "poly", "oracle"};
        else
            algos = {"poly", "oracle"};
    }
    std::vector<CompareRow> rows;
    int code = kOk;
    for (const std::string& algo : algos) {
        CompareRow row;
        row.algo = algo;
        try {
            const Stopwatch clock;
            const Outcome o = run_algorithm(inst, algo, s, model);
            err << algo << " time: " << static_cast<std::int64_t>(clock.millis()) << " ms\n";
            row.objective = o.objective;
            row.cells = o.cells;
        } catch (...) {
            std::ostringstream message;
            const int c = report_failure(message);
            row.error = message.str();
            row.error.erase(std::remove(row.error.begin(), row.error.end(), '\n'), row.error.end());
            code = std::max(code, c);
        }
        rows.push_back(std::move(row));
    }
    // Ratios against the oracle when it ran, else against the best row.
    std::optional<Cost> best;
    for (const CompareRow& row : rows)
        if (row.algo == "oracle" && row.objective)
            best = row.objective;
    if (!best)
        for (const CompareRow& row : rows)
            if (row.objective && (!best || *row.objective < *best))
                best = row.objective;

    out << "| algo | objective | decimal | ratio | cells |\n";
    out << "|---|---|---|---|---|\n";
    for (const CompareRow& row : rows) {
        if (!row.objective) {
            out << "| " << row.algo << " | " << row.error << " | | | |\n";
            continue;
        }
        out << "| " << row.algo << " | " << row.objective->str() << " | " << row.objective->decimal(6) << " | "
            << (best ? ratio_text(*row.objective, *best) : "") << " | " << row.cells << " |\n";
    }
    return code;
}

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string quoted = "\"";
    for (const char c : text) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

struct BenchSettings {
    GenSpec spec;
    int count = 10;
    std::string dir;
    std::vector<std::string> algos{"pseudo"};
    std::string csv_path;
    std::string markdown_path;
    bool timing = true;
};

struct BenchCase {
    std::string name;
    std::string seed;
    std::optional<Instance> instance;
    std::string load_error;
};

struct BenchRow {
    std::string algo;
    std::string objective;
    std::string oracle;
    std::optional<double> ratio;
    std::int64_t millis = 0;
    std::size_t cells = 0;
    bool failed = false;
};

std::vector<BenchCase> bench_cases(const BenchSettings& b)
{
    std::vector<BenchCase> cases;
    if (!b.dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(b.dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            BenchCase c;
            c.name = path.stem().string();
            try {
                c.instance = read_instance(read_file(path.string()));
            } catch (const std::exception& e) {
                c.load_error = e.what();
            }
            cases.push_back(std::move(c));
        }
        return cases;
    }
    for (int k = 0; k < b.count; ++k) {
        GenSpec spec = b.spec;
        spec.seed = b.spec.seed + static_cast<std::uint64_t>(k);
        BenchCase c;
        c.name = "gen-" + std::to_string(spec.seed);
        c.seed = std::to_string(spec.seed);
        c.instance = gen_random(spec);
        cases.push_back(std::move(c));
    }
    return cases;
}

std::vector<BenchRow> bench_one(const BenchCase& c, const BenchSettings& b, const Settings& s, const CostModel& model)
{
    std::vector<BenchRow> rows;
    for (const std::string& algo : b.algos) {
        BenchRow row;
        row.algo = algo;
        if (!c.instance) {
            row.failed = true;
            row.objective = "error: " + c.load_error;
            rows.push_back(std::move(row));
            continue;
        }
        try {
            const Stopwatch clock;
            const Outcome o = run_algorithm(*c.instance, algo, s, model);
            row.millis = b.timing ? static_cast<std::int64_t>(clock.millis()) : 0;
            row.objective = o.objective.str();
            row.cells = o.cells;
            if (s.oracle) {
                try {
                    const Cost best = oracle_for(*c.instance, model, o);
                    row.oracle = best.str();
                    row.ratio = ratio_value(o.objective, best);
                } catch (const std::exception& e) {
                    row.oracle = std::string("error: ") + e.what();
                }
            }
        } catch (...) {
            std::ostringstream message;
            report_failure(message);
            row.failed = true;
            row.objective = message.str();
            row.objective.erase(std::remove(row.objective.begin(), row.objective.end(), '\n'), row.objective.end());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_bench(const BenchSettings& b, const Settings& s, std::ostream& out, std::ostream& err)
{
    const CostModel model = model_of(s);
    const std::vector<BenchCase> cases = bench_cases(b);
    std::vector<std::vector<BenchRow>> results(cases.size());

    // Instances are independent; rows are emitted in instance order.
    Settings per_run = s;
    per_run.threads = 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cases.size(); k = next++)
            results[k] = bench_one(cases[k], b, per_run, model);
    };
    const int workers = std::max(1, std::min<int>(s.threads, static_cast<int>(cases.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    std::ostringstream csv;
    csv << "instance,seed,algo,p,epsilon,objective,oracle,ratio,millis,cells\n";
    for (std::size_t k = 0; k < cases.size(); ++k)
        for (const BenchRow& row : results[k])
            csv << csv_field(cases[k].name) << ',' << cases[k].seed << ',' << row.algo << ','
                << model.exponent().str() << ',' << to_string(model.epsilon) << ',' << csv_field(row.objective)
                << ',' << csv_field(row.oracle) << ',' << (row.ratio ? to_decimal(Real(*row.ratio), 6) : "") << ','
                << row.millis << ',' << row.cells << '\n';

    std::ostringstream md;
    md << "| algo | runs | failures | max ratio | mean ratio |\n";
    md << "|---|---|---|---|---|\n";
    for (const std::string& algo : b.algos) {
        std::size_t runs = 0;
        std::size_t failures = 0;
        std::size_t rated = 0;
        double worst = 0;
        double sum = 0;
        for (const auto& rows : results)
            for (const BenchRow& row : rows) {
                if (row.algo != algo)
                    continue;
                ++runs;
                failures += row.failed ? 1 : 0;
                if (row.ratio) {
                    ++rated;
                    worst = std::max(worst, *row.ratio);
                    sum += *row.ratio;
                }
            }
        md << "| " << algo << " | " << runs << " | " << failures << " | "
           << (rated ? to_decimal(Real(worst), 6) : "") << " | "
           << (rated ? to_decimal(Real(sum / static_cast<double>(rated)), 6) : "") << " |\n";
    }

    if (b.csv_path.empty()) {
        out << csv.str();
    } else {
        write_file(b.csv_path, csv.str());
        out << md.str();
    }
    if (!b.markdown_path.empty())
        write_file(b.markdown_path, md.str());
    err << "bench: " << cases.size() << " instances\n";
    return kOk;
}

int cmd_gen(const GenSpec& spec, const std::string& family, const std::string& out_path, std::ostream& out)
{
    const Instance inst = family.empty() ? gen_random(spec) : gen_adversarial(parse_adversarial_kind(family), spec.n);
    const std::string text = write_instance(inst);
    if (out_path.empty())
        out << text << "\n";
    else
        write_file(out_path, text);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Preemptive flow-time scheduling: approximation algorithms and an exact oracle", "flowsched"};
    app.require_subcommand(1);

    Settings s;
    GenSpec spec;
    std::string family;
    std::string schedule_path;
    std::int64_t lm_deadline = 0;
    std::int64_t lm_start = 0;
    std::optional<std::int64_t> lm_budget;
    std::vector<std::string> algos;
    BenchSettings bench;
    bool no_timing = false;

    auto add_gen_options = [&](CLI::App& cmd) {
        cmd.add_option("--n", spec.n, "number of jobs");
        cmd.add_option("--pmax", spec.p_max, "largest processing time");
        cmd.add_option("--rmax", spec.r_max, "largest release time");
        cmd.add_option("--wmax", spec.w_max, "largest weight");
        cmd.add_option("--machines", spec.machines, "unrelated machines (0: single machine)");
        cmd.add_option("--inf-percent", spec.inf_percent, "chance of an INF processing time");
        cmd.add_option("--seed", spec.seed, "generator seed");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate an instance");
    add_gen_options(*gen);
    gen->add_option("--family", family, "burst, geometric-weights or staircase-releases");
    gen->add_option("--out", s.out_path, "output file (default: stdout)");

    CLI::App* solve = app.add_subcommand("solve", "run one algorithm and report");
    solve->add_option("--algo", s.algo, "edf, pseudo, poly, qptas or oracle");
    solve->add_option("--instance", s.instance_path, "instance file")->required();
    solve->add_option("--deadlines", s.deadlines_path, "deadline file (edf)");
    solve->add_option("--out", s.out_path, "write the schedule here");
    solve->add_flag("--oracle", s.oracle, "also run the exact oracle and print the ratio");
    add_model_options(*solve, s);

    CLI::App* validate = app.add_subcommand("validate", "check a schedule against an instance");
    validate->add_option("--instance", s.instance_path, "instance file")->required();
    validate->add_option("--schedule", schedule_path, "schedule file")->required();
    validate->add_option("--p", s.p_text, "exponent used for the reported objective");

    CLI::App* compare = app.add_subcommand("compare", "run several algorithms on one instance");
    compare->add_option("--instance", s.instance_path, "instance file")->required();
    compare->add_option("--algos", algos, "algorithms (comma separated)")->delimiter(',');
    compare->add_option("--deadlines", s.deadlines_path, "deadline file (edf)");
    add_model_options(*compare, s);

    CLI::App* bench_cmd = app.add_subcommand("bench", "run algorithms over many instances, CSV out");
    add_gen_options(*bench_cmd);
    bench_cmd->add_option("--count", bench.count, "generated instances (seeds seed, seed+1, ...)");
    bench_cmd->add_option("--dir", bench.dir, "read *.json instances from this directory instead");
    bench_cmd->add_option("--algos", bench.algos, "algorithms (comma separated)")->delimiter(',');
    bench_cmd->add_flag("--oracle", s.oracle, "compute ratios against the oracle");
    bench_cmd->add_option("--csv", bench.csv_path, "write CSV here (default: stdout)");
    bench_cmd->add_option("--markdown", bench.markdown_path, "write the summary table here");
    bench_cmd->add_flag("--no-timing", no_timing, "report 0 ms (byte-stable output)");
    add_model_options(*bench_cmd, s);

    CLI::App* edf = app.add_subcommand("edf", "EDF schedule for given deadlines");
    edf->add_option("--instance", s.instance_path, "instance file")->required();
    edf->add_option("--deadlines", s.deadlines_path, "deadline file")->required();
    edf->add_option("--out", s.out_path, "write the schedule here");

    CLI::App* lm = app.add_subcommand("lm", "Lawler-Moore partition for a common deadline");
    lm->add_option("--instance", s.instance_path, "instance file; job weights are the late penalties")->required();
    lm->add_option("--deadline", lm_deadline, "common deadline")->required();
    lm->add_option("--start", lm_start, "nothing runs before this time");
    lm->add_option("--budget", lm_budget, "report the latest start within this penalty instead");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(spec, family, s.out_path, out);
        if (solve->parsed())
            return cmd_solve(s, out, err);
        if (validate->parsed())
            return cmd_validate(s, schedule_path, out);
        if (compare->parsed())
            return cmd_compare(s, algos, out, err);
        if (bench_cmd->parsed()) {
            bench.spec = spec;
            bench.timing = !no_timing;
            return cmd_bench(bench, s, out, err);
        }
        if (edf->parsed())
            return cmd_edf(s, out);
        if (lm->parsed())
            return cmd_lm(s, lm_deadline, lm_start, lm_budget, out);
    } catch (...) {
        return report_failure(err);
    }
    return kUsage;
}

} // namespace flowsched::cli
