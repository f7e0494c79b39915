#pragma once

#include <array>
#include <string_view>

namespace instforge {

enum class Language { python, javascript, java, c_cpp, sql, other };

inline constexpr std::array<Language, 6> kAllLanguages = {
    Language::python, Language::javascript, Language::java,
    Language::c_cpp, Language::sql, Language::other};

/// Maps a fence info string or corpus language field to a normalized tag.
/// Only the first word of the info string is considered; unknown -> other.
Language normalize_language(std::string_view tag) noexcept;

/// Normalized tag ("python", "c_cpp", ...).
std::string_view to_string(Language lang) noexcept;
/// Name used in lint reports ("Python", "C++", ...).
std::string_view display_name(Language lang) noexcept;
std::string_view file_extension(Language lang) noexcept;

}  // namespace instforge
