#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qport {

/// Format with 17 significant digits, enough to round-trip any IEEE double.
std::string format_g17(double value);

/// Strict numeric parsing; `where` is prepended to error messages.
/// All of these throw Error(ParseError) on malformed input.
double parse_double(std::string_view text, std::string_view where);
std::uint64_t parse_u64(std::string_view text, std::string_view where);
std::int64_t parse_i64(std::string_view text, std::string_view where);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

std::vector<double> parse_double_list(std::string_view text, std::string_view where);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

} // namespace qport
