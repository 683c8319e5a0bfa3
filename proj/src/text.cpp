#include "lorentz/text.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "lorentz/error.hpp"

namespace lorentz::text {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw Error(ErrorKind::parse, "empty number");
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const double num = parse_double(s.substr(0, slash));
    const double den = parse_double(s.substr(slash + 1));
    if (den == 0.0) throw Error(ErrorKind::parse, "zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::parse, "not a number: '" + std::string(s) + "'");
  return value;
}

long long parse_int(std::string_view s) {
  s = trim(s);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // Allow integral values written in floating notation, e.g. 1e6.
    const double d = parse_double(s);
    if (d != std::floor(d) || std::abs(d) > 9.0e15)
      throw Error(ErrorKind::parse, "not an integer: '" + std::string(s) + "'");
    return static_cast<long long>(d);
  }
  return value;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::pair<std::string_view, std::string_view> split_head(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {spec, {}};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace lorentz::text
