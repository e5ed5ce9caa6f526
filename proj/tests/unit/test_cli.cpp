#include "cli.hpp"

#include "flowsched/dp_pseudo.hpp"
#include "flowsched/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace flowsched;

namespace {

namespace fs = std::filesystem;

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run run;
    run.code = flowsched::cli::run(args, out, err);
    run.out = out.str();
    run.err = err.str();
    return run;
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("flowsched_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& contents = {}) const
    {
        const std::string p = (path_ / name).string();
        if (!contents.empty())
            write_file(p, contents);
        return p;
    }
    std::string path() const { return path_.string(); }

private:
    fs::path path_;
};

/// Value after "key: " on its own line; the rational part before any " (".
std::string field(const std::string& report, const std::string& key)
{
    std::istringstream lines(report);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind(key + ": ", 0) == 0) {
            std::string value = line.substr(key.size() + 2);
            return value.substr(0, value.find(" ("));
        }
    return {};
}

const char* kTwoJobs = R"({"jobs": [{"p": 3, "r": 0, "w": 1}, {"p": 1, "r": 1, "w": 4}]})";

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("pseudo on a two-job fixture reports a ratio of at most 6")
    {
        TempDir dir;
        const std::string inst = dir.file("two.json", kTwoJobs);
        const Run run = run_cli({"solve", "--algo", "pseudo", "--instance", inst, "--oracle"});
        REQUIRE(run.code == 0);
        const Rational ratio = parse_rational(field(run.out, "ratio"));
        CHECK(ratio >= 1);
        CHECK(ratio <= 6);
        CHECK(field(run.out, "oracle") == "8"); // job 1 preempts job 0: 4 * 1 + 1 * 4
    }

    TEST_CASE("poly with p = 1 and epsilon 1/2 stays within 6.5")
    {
        TempDir dir;
        const std::string inst = dir.file("two.json", kTwoJobs);
        const Run run = run_cli({"solve", "--algo", "poly", "--p", "1", "--epsilon", "0.5", "--instance", inst, "--oracle"});
        REQUIRE(run.code == 0);
        CHECK(parse_rational(field(run.out, "ratio")) <= Rational(13, 2));
        CHECK_FALSE(field(run.out, "root budget").empty());
    }

    TEST_CASE("oracle over budget exits with 2")
    {
        TempDir dir;
        const std::string inst = dir.file("big.json");
        REQUIRE(run_cli({"gen", "--n", "14", "--pmax", "4", "--seed", "3", "--out", inst}).code == 0);
        const Run run = run_cli({"solve", "--algo", "oracle", "--instance", inst});
        CHECK(run.code == 2);
        CHECK(run.err.find("instance too large for oracle") != std::string::npos);
    }

    TEST_CASE("usage and parse errors exit with 1")
    {
        TempDir dir;
        const std::string inst = dir.file("two.json", kTwoJobs);
        CHECK(run_cli({}).code == 1);
        CHECK(run_cli({"solve"}).code == 1);
        CHECK(run_cli({"solve", "--algo", "magic", "--instance", inst}).code == 1);
        CHECK(run_cli({"solve", "--instance", inst, "--p", "9"}).code == 1);
        CHECK(run_cli({"solve", "--instance", inst, "--p", "2"}).code == 1); // pseudo is p = 1 only
        CHECK(run_cli({"solve", "--instance", dir.file("bad.json", "{\"jobs\": [{\"p\": 0}]}")}).code == 1);
        CHECK(run_cli({"solve", "--instance", dir.file("missing.json")}).code == 1);
        CHECK(run_cli({"--help"}).code == 0);
    }

    TEST_CASE("schedules round-trip through validate")
    {
        TempDir dir;
        const std::string inst = dir.file("two.json", kTwoJobs);
        const std::string sched = dir.file("s.json");
        REQUIRE(run_cli({"solve", "--instance", inst, "--out", sched}).code == 0);
        const Run ok = run_cli({"validate", "--instance", inst, "--schedule", sched});
        CHECK(ok.code == 0);
        CHECK(ok.out.rfind("valid", 0) == 0);

        const std::string broken = dir.file("broken.json", R"({"slots": [{"m": 0, "j": 0, "a": "0", "b": "3"}]})");
        const Run bad = run_cli({"validate", "--instance", inst, "--schedule", broken});
        CHECK(bad.code == 4);
        CHECK(bad.out.rfind("invalid", 0) == 0);
    }

    TEST_CASE("edf exit code follows the verdict")
    {
        TempDir dir;
        const std::string inst = dir.file("two.json", kTwoJobs);
        const Run met = run_cli({"edf", "--instance", inst, "--deadlines", dir.file("d1.json", R"({"deadlines": [4, 2]})")});
        CHECK(met.code == 0);
        CHECK(met.out.find("verdict: all deadlines met") != std::string::npos);
        const Run missed = run_cli({"edf", "--instance", inst, "--deadlines", dir.file("d2.json", R"({"deadlines": [2, 2]})")});
        CHECK(missed.code == 4);
        CHECK(missed.out.find("misses deadline") != std::string::npos);
    }

    TEST_CASE("lm prints the partition")
    {
        TempDir dir;
        const std::string inst = dir.file("two.json", kTwoJobs);
        const Run run = run_cli({"lm", "--instance", inst, "--deadline", "3"});
        REQUIRE(run.code == 0);
        CHECK(run.out.find("job 0: late") != std::string::npos);
        CHECK(run.out.find("job 1: on time") != std::string::npos);
        CHECK(field(run.out, "penalty") == "1");
        const Run budget = run_cli({"lm", "--instance", inst, "--deadline", "4", "--budget", "0"});
        CHECK(budget.code == 0);
        CHECK(field(budget.out, "latest start") == "0");
    }

    TEST_CASE("qptas through the CLI")
    {
        TempDir dir;
        const std::string inst = dir.file("m.json");
        REQUIRE(run_cli({"gen", "--n", "3", "--pmax", "3", "--machines", "2", "--seed", "5", "--out", inst}).code == 0);
        for (const std::string mode : {"on", "off"}) {
            const Run run = run_cli({"solve", "--algo", "qptas", "--instance", inst, "--epsilon", "1", "--migration", mode,
                                 "--ticks-per-unit", "1", "--oracle"});
            REQUIRE(run.code == 0);
            CHECK(parse_rational(field(run.out, "ratio")) <= 8);
        }
        CHECK(run_cli({"solve", "--algo", "qptas", "--instance", inst, "--migration", "maybe"}).code == 1);
        const Run tight = run_cli({"solve", "--algo", "qptas", "--instance", inst, "--state-budget", "0",
                               "--ticks-per-unit", "1"});
        CHECK(tight.code == 2);
    }

    TEST_CASE("bench with no instances prints the header only")
    {
        TempDir dir;
        const Run run = run_cli({"bench", "--dir", dir.path()});
        CHECK(run.code == 0);
        CHECK(run.out == "instance,seed,algo,p,epsilon,objective,oracle,ratio,millis,cells\n");
    }

    TEST_CASE("bench rows are ordered and identical across thread counts")
    {
        const std::vector<std::string> base{"bench", "--count", "12", "--n", "5", "--pmax", "3",
                                            "--algos", "pseudo,poly", "--oracle", "--no-timing"};
        std::vector<std::string> threaded = base;
        threaded.insert(threaded.end(), {"--threads", "3"});
        const Run one = run_cli(base);
        const Run three = run_cli(threaded);
        REQUIRE(one.code == 0);
        CHECK(one.out == three.out);
        CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 1 + 12 * 2);
    }

    TEST_CASE("bench keeps going after a failing instance")
    {
        TempDir dir;
        dir.file("a.json", kTwoJobs);
        dir.file("b.json", "not json");
        TempDir csv_dir;
        const std::string csv = csv_dir.file("out.csv");
        const Run run = run_cli({"bench", "--dir", dir.path(), "--algos", "pseudo", "--csv", csv});
        CHECK(run.code == 0);
        const std::string text = read_file(csv);
        CHECK(text.find("a,,pseudo,1,1,") != std::string::npos);
        CHECK(text.find("b,,pseudo,1,1,") != std::string::npos);
        CHECK(run.out.find("| pseudo | 2 | 1 |") != std::string::npos);
    }

    TEST_CASE("max pseudo ratio over seeded instances is at most 6")
    {
        const Run run = run_cli({"bench", "--count", "150", "--n", "6", "--pmax", "3", "--rmax", "6", "--algos", "pseudo",
                             "--oracle", "--no-timing"});
        REQUIRE(run.code == 0);
        std::istringstream lines(run.out);
        std::string line;
        std::getline(lines, line);
        int rows = 0;
        while (std::getline(lines, line)) {
            std::vector<std::string> cols;
            std::stringstream parts(line);
            std::string col;
            while (std::getline(parts, col, ','))
                cols.push_back(col);
            REQUIRE(cols.size() == 10);
            CHECK(parse_rational(cols[5]) <= 6 * parse_rational(cols[6]));
            ++rows;
        }
        CHECK(rows == 150);
    }

    TEST_CASE("solve output is byte-identical across runs and thread counts")
    {
        TempDir dir;
        const std::string inst = dir.file("i.json");
        REQUIRE(run_cli({"gen", "--n", "9", "--pmax", "5", "--rmax", "20", "--seed", "11", "--out", inst}).code == 0);
        for (const std::string algo : {"pseudo", "poly"}) {
            const std::string s1 = dir.file(algo + "1.json");
            const std::string s2 = dir.file(algo + "2.json");
            const Run a = run_cli({"solve", "--algo", algo, "--instance", inst, "--out", s1});
            const Run b = run_cli({"solve", "--algo", algo, "--instance", inst, "--out", s2, "--threads", "4"});
            REQUIRE(a.code == 0);
            CHECK(a.out == b.out);
            CHECK(read_file(s1) == read_file(s2));
        }
    }

    TEST_CASE("pseudo cell count grows at most quadratically in T")
    {
        // Same job shapes, releases stretched so that T doubles each step.
        std::vector<double> log_t;
        std::vector<double> log_cells;
        for (std::int64_t scale = 1; scale <= 16; scale *= 2) {
            std::vector<Job> jobs;
            for (int k = 0; k < 6; ++k)
                jobs.push_back({-1, 1 + k % 3, k * 2 * scale, 1 + k % 2});
            const Instance inst(jobs);
            PseudoDp dp(inst);
            dp.solve();
            const auto T = static_cast<double>(inst.horizon());
            CHECK(static_cast<double>(dp.cell_count()) <= 4 * T * T);
            log_t.push_back(std::log(T));
            log_cells.push_back(std::log(static_cast<double>(dp.cell_count())));
        }
        // Least-squares slope of log cells against log T.
        const auto k = static_cast<double>(log_t.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < log_t.size(); ++i) {
            sx += log_t[i];
            sy += log_cells[i];
            sxx += log_t[i] * log_t[i];
            sxy += log_t[i] * log_cells[i];
        }
        const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        CHECK(slope <= 2.2);
    }
}
