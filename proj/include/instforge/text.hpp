#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace instforge::text {

/// Splits on '\n' (a trailing "\r" is stripped from each line). A final
/// newline does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim(std::string_view s) noexcept;
std::string_view ltrim(std::string_view s) noexcept;
std::string_view rtrim(std::string_view s) noexcept;

std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
/// Case-insensitive (ASCII) search; npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0) noexcept;
std::size_t ifind_last(std::string_view haystack, std::string_view needle) noexcept;

std::string replace_all(std::string s, std::string_view from, std::string_view to);

std::string read_file(const std::filesystem::path& path);
/// Writes via a sibling temp file and rename, so readers never see a torn file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace instforge::text
