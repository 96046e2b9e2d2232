#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcbench {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace mcbench
