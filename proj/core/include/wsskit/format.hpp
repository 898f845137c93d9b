#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wsskit/geometry.hpp"

namespace wsskit {

/// Shortest decimal form that parses back to the identical double.
std::string format_roundtrip(double v);

/// General format with `digits` significant digits (VTK output uses 9).
std::string format_significant(double v, int digits);

/// Strict full-string parse of a double; throws Errc::parse with `what`.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

/// "x,y,z" -> Vec3 (Errc::bad_argument on malformed input).
Vec3 parse_vec3(std::string_view text);

/// Splits on a single delimiter; keeps empty fields.
std::vector<std::string> split(std::string_view text, char delimiter);

std::string_view trim(std::string_view text);

}  // namespace wsskit
