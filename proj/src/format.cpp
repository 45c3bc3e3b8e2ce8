#include "wisar/format.hpp"

#include <charconv>
#include <stdexcept>

namespace wisar {

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

long long parse_int(const std::string& text) {
    long long v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("not an integer: '" + text + "'");
    return v;
}

unsigned long long parse_uint(const std::string& text) {
    unsigned long long v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("not an unsigned integer: '" + text + "'");
    return v;
}

}  // namespace wisar
