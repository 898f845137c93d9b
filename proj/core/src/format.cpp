#include "wsskit/format.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "wsskit/error.hpp"

namespace wsskit {

std::string format_roundtrip(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_significant(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "nan" || text == "NaN" || text == "-nan") return std::nan("");
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    fail(Errc::parse, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    fail(Errc::parse, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  return value;
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Vec3 parse_vec3(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) fail(Errc::bad_argument, "expected x,y,z but got '" + std::string(text) + "'");
  try {
    return {parse_double(parts[0], "x"), parse_double(parts[1], "y"), parse_double(parts[2], "z")};
  } catch (const Error& e) {
    fail(Errc::bad_argument, e.what());
  }
}

}  // namespace wsskit
