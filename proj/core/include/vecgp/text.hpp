#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vecgp {

// Shortest decimal form that parses back to the exact same double.
std::string format_double(double x);

// Strict double parse of the whole token; throws ParseError otherwise.
double parse_double(std::string_view token);

// Strict integer parses of the whole token; throw ParseError otherwise.
long long parse_int(std::string_view token);
unsigned long long parse_uint(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char delimiter);

std::string join(std::span<const std::string> parts, char delimiter);

} // namespace vecgp
