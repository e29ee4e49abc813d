#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phasetopo {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict parse of the whole token; std::nullopt on trailing junk or overflow.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char delimiter);
std::vector<std::string_view> split_whitespace(std::string_view text);

/// 64-bit FNV-1a over raw bytes, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace phasetopo
