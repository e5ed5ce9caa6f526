#include "flowsched/io.hpp"

#include <json.hpp>

#include <fstream>
#include <numeric>
#include <sstream>

namespace flowsched {

using nlohmann::json;

namespace {

json parse_document(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

const json& member(const json& object, const char* key, const std::string& path)
{
    if (!object.is_object())
        throw ParseError(path + ": expected an object");
    auto it = object.find(key);
    if (it == object.end())
        throw ParseError(path + ": missing field \"" + key + "\"");
    return *it;
}

std::int64_t as_integer(const json& value, const std::string& path)
{
    if (value.is_number_integer()) {
        if (value.is_number_unsigned() && value.get<std::uint64_t>() > static_cast<std::uint64_t>(kInfinity - 1))
            throw ParseError(path + ": integer out of range");
        return value.get<std::int64_t>();
    }
    throw ParseError(path + ": expected an integer");
}

// Integer or the string "inf".
std::int64_t as_extended(const json& value, const std::string& path)
{
    if (value.is_string()) {
        const auto& text = value.get_ref<const std::string&>();
        if (text == "inf" || text == "INF")
            return kInfinity;
        throw ParseError(path + ": expected an integer or \"inf\"");
    }
    return as_integer(value, path);
}

json extended(std::int64_t value)
{
    return value == kInfinity ? json("inf") : json(value);
}

} // namespace

Instance read_instance(std::string_view text)
{
    const json doc = parse_document(text);
    const json& jobs_node = member(doc, "jobs", "$");
    if (!jobs_node.is_array())
        throw ParseError("$.jobs: expected an array");
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < jobs_node.size(); ++k) {
        const std::string path = "$.jobs[" + std::to_string(k) + "]";
        const json& node = jobs_node[k];
        Job job;
        job.p = as_integer(member(node, "p", path), path + ".p");
        job.r = as_integer(member(node, "r", path), path + ".r");
        job.w = node.contains("w") ? as_integer(node["w"], path + ".w") : 1;
        jobs.push_back(job);
    }
    try {
        if (doc.contains("machines")) {
            const json& rows = doc["machines"];
            if (!rows.is_array())
                throw ParseError("$.machines: expected an array");
            MachineMatrix matrix;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const std::string path = "$.machines[" + std::to_string(i) + "]";
                if (!rows[i].is_array())
                    throw ParseError(path + ": expected an array");
                std::vector<std::int64_t> row;
                for (std::size_t j = 0; j < rows[i].size(); ++j)
                    row.push_back(as_extended(rows[i][j], path + "[" + std::to_string(j) + "]"));
                matrix.push_back(std::move(row));
            }
            return Instance(std::move(jobs), std::move(matrix));
        }
        return Instance(std::move(jobs));
    } catch (const InvalidInstance& e) {
        throw ParseError(std::string("invalid instance: ") + e.what());
    }
}

std::string write_instance(const Instance& instance)
{
    json jobs = json::array();
    for (std::size_t id = 0; id < instance.size(); ++id) {
        const Job& job = instance.job_by_id(static_cast<int>(id));
        jobs.push_back({{"p", job.p}, {"r", job.r}, {"w", job.w}});
    }
    json doc = {{"jobs", jobs}};
    if (const auto& machines = instance.machines()) {
        json rows = json::array();
        for (const auto& row : *machines) {
            json out = json::array();
            for (auto v : row)
                out.push_back(extended(v));
            rows.push_back(out);
        }
        doc["machines"] = rows;
    }
    return doc.dump(2) + "\n";
}

std::string format_time(std::int64_t ticks, std::int64_t scale)
{
    const Rational value(ticks, scale);
    BigInt den = boost::multiprecision::denominator(value);
    int twos = 0;
    int fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1)
        return to_string(value);
    return to_decimal(value, std::max(twos, fives));
}

std::int64_t parse_time(std::string_view text, std::int64_t scale)
{
    Rational value;
    try {
        value = parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    const Rational ticks = value * scale;
    if (boost::multiprecision::denominator(ticks) != 1)
        throw ParseError("time '" + std::string(text) + "' is not on the grid");
    return floor_to_int64(ticks);
}

Schedule read_schedule(std::string_view text)
{
    const json doc = parse_document(text);
    const json& slots = member(doc, "slots", "$");
    if (!slots.is_array())
        throw ParseError("$.slots: expected an array");

    auto time_text = [](const json& node, const std::string& path) {
        if (node.is_string())
            return node.get<std::string>();
        if (node.is_number_integer())
            return std::to_string(node.get<std::int64_t>());
        throw ParseError(path + ": expected a time string");
    };

    // The common denominator of all endpoints becomes the time scale.
    std::vector<std::pair<Rational, Rational>> bounds;
    BigInt scale = 1;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const std::string path = "$.slots[" + std::to_string(k) + "]";
        Rational a;
        Rational b;
        try {
            a = parse_rational(time_text(member(slots[k], "a", path), path + ".a"));
            b = parse_rational(time_text(member(slots[k], "b", path), path + ".b"));
        } catch (const std::invalid_argument& e) {
            throw ParseError(path + ": " + e.what());
        }
        scale = boost::multiprecision::lcm(scale, BigInt(boost::multiprecision::denominator(a)));
        scale = boost::multiprecision::lcm(scale, BigInt(boost::multiprecision::denominator(b)));
        bounds.emplace_back(a, b);
    }
    if (scale > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
        throw ParseError("$.slots: time grid too fine");

    Schedule schedule;
    schedule.time_scale = scale.convert_to<std::int64_t>();
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const std::string path = "$.slots[" + std::to_string(k) + "]";
        Slot slot;
        const std::int64_t machine = as_integer(member(slots[k], "m", path), path + ".m");
        if (machine < 0)
            throw ParseError(path + ".m: negative machine index");
        slot.machine = static_cast<std::size_t>(machine);
        slot.job = static_cast<int>(as_integer(member(slots[k], "j", path), path + ".j"));
        slot.start = floor_to_int64(bounds[k].first * schedule.time_scale);
        slot.end = floor_to_int64(bounds[k].second * schedule.time_scale);
        schedule.slots.push_back(slot);
    }
    return schedule;
}

std::string write_schedule(const Schedule& schedule)
{
    json slots = json::array();
    for (const Slot& slot : schedule.slots)
        slots.push_back({{"m", slot.machine},
                         {"a", format_time(slot.start, schedule.time_scale)},
                         {"b", format_time(slot.end, schedule.time_scale)},
                         {"j", slot.job}});
    return json{{"slots", slots}}.dump() + "\n";
}

DeadlineAssignment read_deadlines(std::string_view text)
{
    const json doc = parse_document(text);
    const json& values = member(doc, "deadlines", "$");
    if (!values.is_array())
        throw ParseError("$.deadlines: expected an array");
    DeadlineAssignment out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::int64_t d = as_extended(values[k], "$.deadlines[" + std::to_string(k) + "]");
        if (d < 0)
            throw ParseError("$.deadlines[" + std::to_string(k) + "]: negative deadline");
        out.d.push_back(d);
    }
    return out;
}

std::string write_deadlines(const DeadlineAssignment& deadlines)
{
    json values = json::array();
    for (auto d : deadlines.d)
        values.push_back(extended(d));
    return json{{"deadlines", values}}.dump() + "\n";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FileError("cannot write '" + path + "'");
    out << contents;
    if (!out)
        throw FileError("error writing '" + path + "'");
}

} // namespace flowsched
