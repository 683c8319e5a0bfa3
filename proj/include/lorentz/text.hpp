#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lorentz::text {

/// Accepts plain decimals, `inf`, and rationals such as `-1/2`.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

/// Shortest decimal that reads back to the identical double.
std::string format_double(double x);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Splits `head:rest` at the first colon; rest is empty when there is none.
std::pair<std::string_view, std::string_view> split_head(std::string_view spec);

}  // namespace lorentz::text
