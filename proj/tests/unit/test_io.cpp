#include "flowsched/gen.hpp"
#include "flowsched/io.hpp"

#include <doctest.h>

using namespace flowsched;

TEST_SUITE("io")
{
    TEST_CASE("minimal document")
    {
        const Instance inst = read_instance(R"({"jobs":[{"p":1,"r":0,"w":1}]})");
        CHECK(inst.size() == 1);
        CHECK(inst.horizon() == 2);
    }

    TEST_CASE("two-job document")
    {
        const Instance inst = read_instance(R"({"jobs":[{"p":2,"r":0,"w":1},{"p":3,"r":1,"w":2}]})");
        CHECK(inst.horizon() == 8);
    }

    TEST_CASE("machine matrix with inf entries")
    {
        const Instance inst =
            read_instance(R"({"jobs":[{"p":1,"r":0,"w":1},{"p":1,"r":0,"w":1}],"machines":[[1,"inf"],[2,3]]})");
        CHECK(inst.multi_machine());
        CHECK(inst.processing(0, 1) == kInfinity);
        CHECK(inst.processing(1, 1) == 3);
        CHECK(inst.horizon() == 0 + 2 * 3);
    }

    TEST_CASE("malformed input is rejected with a location")
    {
        auto message = [](const char* text) -> std::string {
            try {
                read_instance(text);
            } catch (const ParseError& e) {
                return e.what();
            }
            return "";
        };
        CHECK(message(R"({"jobs":[{"p":1,"r":0,"w":1})").find("byte") != std::string::npos);
        CHECK(message(R"({"jobs":[{"p":1.5,"r":0,"w":1}]})").find("$.jobs[0].p") != std::string::npos);
        CHECK(message(R"({"jobs":[{"p":0,"r":0,"w":1}]})").find("processing time") != std::string::npos);
        CHECK(message(R"({"jobs":[{"p":1,"r":-1,"w":1}]})").find("release") != std::string::npos);
        CHECK(message(R"({"jobs":[{"p":1,"r":0,"w":0}]})").find("weight") != std::string::npos);
        CHECK(message(R"({"jobs":[{"p":1,"r":0,"w":1}],"machines":[["inf"]]})").find("finite") !=
              std::string::npos);
        CHECK(message(R"({"jobs":[{"r":0,"w":1}]})").find("missing field \"p\"") != std::string::npos);
        CHECK(message(R"({"jobs":[]})").find("no jobs") != std::string::npos);
        CHECK(message(R"({"jobs":[{"p":"x","r":0,"w":1}]})").find("$.jobs[0].p") != std::string::npos);
    }

    TEST_CASE("write then read is the identity on random instances")
    {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            GenSpec spec;
            spec.n = 1 + static_cast<int>(seed % 7);
            spec.machines = static_cast<int>(seed % 3);
            spec.inf_percent = 30;
            spec.seed = seed;
            const Instance inst = gen_random(spec);
            const std::string text = write_instance(inst);
            const Instance back = read_instance(text);
            CHECK(back == inst);
            CHECK(write_instance(back) == text);
        }
    }

    TEST_CASE("time strings are exact")
    {
        CHECK(format_time(3, 1) == "3");
        CHECK(format_time(3, 2) == "1.5");
        CHECK(format_time(1, 4) == "0.25");
        CHECK(format_time(1, 3) == "1/3");
        CHECK(format_time(7, 6) == "7/6");
        CHECK(parse_time("1.5", 2) == 3);
        CHECK(parse_time("7/6", 6) == 7);
        CHECK_THROWS_AS(parse_time("1/3", 2), ParseError);
    }

    TEST_CASE("schedule round trip")
    {
        Schedule s;
        s.time_scale = 6;
        s.slots = {{0, 0, 3, 1}, {1, 3, 7, 0}, {0, 7, 12, 2}};
        const std::string text = write_schedule(s);
        CHECK(text.find(R"("a":"0.5")") != std::string::npos);
        CHECK(text.find(R"("b":"7/6")") != std::string::npos);
        const Schedule back = read_schedule(text);
        CHECK(back == s.normalized());
        CHECK(write_schedule(back) == text);
    }

    TEST_CASE("deadline documents")
    {
        const DeadlineAssignment d = read_deadlines(R"({"deadlines":[3,"inf",0]})");
        CHECK(d.d == std::vector<std::int64_t>{3, kInfinity, 0});
        CHECK(read_deadlines(write_deadlines(d)) == d);
        CHECK_THROWS_AS(read_deadlines(R"({"deadlines":[-1]})"), ParseError);
    }
}
