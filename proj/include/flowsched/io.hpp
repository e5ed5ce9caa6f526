#pragma once

#include "flowsched/instance.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowsched {

/// Malformed or invalid input document. The message carries the byte offset
/// or the JSON path of the offending value.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Instance read_instance(std::string_view text);
std::string write_instance(const Instance& instance);

Schedule read_schedule(std::string_view text);
std::string write_schedule(const Schedule& schedule);

/// {"deadlines": [int | "inf", ...]} indexed by job id.
DeadlineAssignment read_deadlines(std::string_view text);
std::string write_deadlines(const DeadlineAssignment& deadlines);

/// Renders ticks/scale as a decimal string when it terminates, else "num/den".
std::string format_time(std::int64_t ticks, std::int64_t scale);
/// Parses a time string and converts it to ticks at the given scale.
/// Throws ParseError if the value is not a multiple of 1/scale.
std::int64_t parse_time(std::string_view text, std::int64_t scale);

/// A file could not be opened, read or written.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace flowsched
