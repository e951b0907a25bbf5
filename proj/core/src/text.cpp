#include "vecgp/text.hpp"

#include <charconv>
#include <system_error>

#include "vecgp/errors.hpp"

namespace vecgp {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("not a number: '" + std::string(token) + "'");
    }
    return out;
}

namespace {

template <typename T>
T parse_integral(std::string_view token) {
    T out = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("not an integer: '" + std::string(token) + "'");
    }
    return out;
}

} // namespace

long long parse_int(std::string_view token) { return parse_integral<long long>(token); }
unsigned long long parse_uint(std::string_view token) { return parse_integral<unsigned long long>(token); }

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string join(std::span<const std::string> parts, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.push_back(delimiter);
        out += parts[i];
    }
    return out;
}

} // namespace vecgp
