// units.hpp - SI-suffixed number grammar and fixed numeric formatting
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rectenna {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Parses a decimal number with an optional single SI suffix:
/// f p n u m k M G (e.g. "100p", "22k", "1.29G", "-3.5e-2").
/// Returns nullopt on any trailing garbage.
std::optional<double> try_parse_si(std::string_view text);

/// Throws ArgumentError naming the offending text.
double parse_si(std::string_view text);

/// Six significant digits, `%.6g` style; the only numeric format used in
/// CSV and CLI output so golden files stay byte-stable.
std::string format_number(double value);

/// Round-trip-exact representation, used when serializing configs.
std::string format_exact(double value);

}  // namespace rectenna
