#include "instforge/language.hpp"

#include <string>

#include "instforge/text.hpp"

namespace instforge {

Language normalize_language(std::string_view tag) noexcept {
  auto word = text::trim(tag);
  if (auto sp = word.find_first_of(" \t{"); sp != std::string_view::npos) word = word.substr(0, sp);
  const std::string t = text::to_lower(word);
  if (t == "python" || t == "py" || t == "python3") return Language::python;
  if (t == "javascript" || t == "js") return Language::javascript;
  if (t == "java") return Language::java;
  if (t == "c" || t == "c++" || t == "cpp" || t == "c/c++" || t == "cc" || t == "cxx" || t == "c_cpp")
    return Language::c_cpp;
  if (t == "sql") return Language::sql;
  return Language::other;
}

std::string_view to_string(Language lang) noexcept {
  switch (lang) {
    case Language::python: return "python";
    case Language::javascript: return "javascript";
    case Language::java: return "java";
    case Language::c_cpp: return "c_cpp";
    case Language::sql: return "sql";
    case Language::other: return "other";
  }
  return "other";
}

std::string_view display_name(Language lang) noexcept {
  switch (lang) {
    case Language::python: return "Python";
    case Language::javascript: return "JavaScript";
    case Language::java: return "Java";
    case Language::c_cpp: return "C++";
    case Language::sql: return "SQL";
    case Language::other: return "Other";
  }
  return "Other";
}

std::string_view file_extension(Language lang) noexcept {
  switch (lang) {
    case Language::python: return ".py";
    case Language::javascript: return ".js";
    case Language::java: return ".java";
    case Language::c_cpp: return ".cpp";
    case Language::sql: return ".sql";
    case Language::other: return ".txt";
  }
  return ".txt";
}

}  // namespace instforge
