#include "rectenna/units.hpp"

#include "rectenna/errors.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>

namespace rectenna {

namespace {

std::optional<double> suffix_scale(char c) {
    switch (c) {
    case 'f': return 1e-15;
    case 'p': return 1e-12;
    case 'n': return 1e-9;
    case 'u': return 1e-6;
    case 'm': return 1e-3;
    case 'k': return 1e3;
    case 'M': return 1e6;
    case 'G': return 1e9;
    default: return std::nullopt;
    }
}

}  // namespace

std::optional<double> try_parse_si(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    // from_chars rejects a leading '+'
    if (text.front() == '+') text.remove_prefix(1);

    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) return std::nullopt;
    if (ptr == last) return value;
    if (ptr + 1 != last) return std::nullopt;
    auto scale = suffix_scale(*ptr);
    if (!scale) return std::nullopt;
    return value * *scale;
}

double parse_si(std::string_view text) {
    auto v = try_parse_si(text);
    if (!v) throw ArgumentError("not a number: '" + std::string(text) + "'");
    return *v;
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    return fmt::format("{:.6g}", value);
}

std::string format_exact(double value) {
    if (value == 0.0) return "0";
    return fmt::format("{}", value);
}

}  // namespace rectenna
