#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the CSV readers and writers.
namespace aam::text {

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse: the whole field must be consumed. Returns false on failure.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace aam::text
