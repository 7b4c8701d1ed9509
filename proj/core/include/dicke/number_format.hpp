#pragma once

#include <string>
#include <string_view>

namespace dicke {

/// Shortest decimal that parses back to the same binary64 value.
/// Non-finite values print as "inf", "-inf" and "nan".
std::string format_double(double value);

/// Inverse of format_double; throws std::invalid_argument on bad input.
double parse_double(std::string_view text);

/// RFC 4180 field quoting: quoted when the text holds a comma, quote or
/// line break, with embedded quotes doubled.
std::string csv_field(std::string_view text);

}  // namespace dicke
