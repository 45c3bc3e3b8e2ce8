#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace wisar {

/// Shortest round-trip decimal form, independent of the C locale.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

/// Locale-independent parse; throws std::invalid_argument on malformed input.
double parse_double(const std::string& text);

long long parse_int(const std::string& text);

unsigned long long parse_uint(const std::string& text);

}  // namespace wisar
