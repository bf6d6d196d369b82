#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gbtpp {

/// 17 significant digits: parses back to the identical double.
[[nodiscard]] std::string format_double(double x);

/// Splits one CSV line on commas. No quoting support (none of our formats need it).
[[nodiscard]] std::vector<std::string_view> split_csv(std::string_view line);

[[nodiscard]] std::string_view trim(std::string_view s) noexcept;

/// Strict parsers: the whole token must be consumed. Throw ValidationError.
[[nodiscard]] double parse_double(std::string_view s);
[[nodiscard]] long long parse_int(std::string_view s);
[[nodiscard]] bool try_parse_int(std::string_view s, long long& out) noexcept;

}  // namespace gbtpp
