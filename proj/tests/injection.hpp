#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "instforge/language.hpp"

// Synthetic prompt-response pairs for gate precision/recall checks.
namespace instforge::testing {

struct SyntheticPair {
  std::string prompt;
  std::string response;
  Language language = Language::python;
  bool broken = false;
};

enum class Breakage { unbalanced_brace, stray_prose };

inline std::string clean_code(Language lang, std::size_t n) {
  const auto k = std::to_string(n);
  switch (lang) {
    case Language::python:
      return "def scale_" + k + "(values, factor):\n    \"\"\"Multiply each value.\"\"\"\n    table = {\"factor\": factor}\n"
             "    return [v * table[\"factor\"] for v in values]\n\n\nprint(scale_" + k + "([1, 2], " + k + "))\n";
    case Language::javascript:
      return "function total" + k + "(items) {\n  const sums = { value: 0 };\n  for (const item of items) {\n"
             "    sums.value += item.price * item.qty;\n  }\n  return sums.value;\n}\n\n"
             "console.log(total" + k + "([{ price: " + k + ", qty: 2 }]));\n";
    case Language::c_cpp:
      return "#include <cstdio>\n#include <vector>\n\nint sum" + k + "(const std::vector<int>& xs) {\n  int s = 0;\n"
             "  for (int x : xs) {\n    s += x;\n  }\n  return s;\n}\n\nint main() {\n"
             "  std::printf(\"%d\\n\", sum" + k + "({1, 2, " + k + "}));\n  return 0;\n}\n";
    case Language::sql:
      return "SELECT\n    id,\n    name\nFROM users\nWHERE id = " + k + ";\n";
    default:
      return "";
  }
}

inline std::string broken_code(Language lang, std::size_t n, Breakage how) {
  const auto k = std::to_string(n);
  if (how == Breakage::stray_prose) {
    const std::string prose = "This function walks the list and returns the result for item " + k + ".\n";
    auto code = clean_code(lang, n);
    const auto cut = code.find('\n', code.size() / 2);
    return code.substr(0, cut + 1) + prose + code.substr(cut + 1);
  }
  switch (lang) {
    case Language::python:
      return "def scale_" + k + "(values, factor):\n    table = {\"factor\": factor\n"
             "    return [v * table[\"factor\"] for v in values]\n";
    case Language::javascript:
      return "function total" + k + "(items) {\n  let sum = 0;\n  for (const item of items) {\n"
             "    sum += item.price;\n  return sum;\n}\n";
    case Language::c_cpp:
      return "#include <cstdio>\n\nint main() {\n  for (int i = 0; i < " + k + "; ++i) {\n"
             "    std::printf(\"%d\\n\", i);\n  return 0;\n}\n";
    case Language::sql:
      return "SELECT\n    id,\n    COUNT(*\nFROM orders\nWHERE id = " + k + "\nGROUP BY id;\n";
    default:
      return "";
  }
}

inline std::string fence_tag(Language lang) {
  switch (lang) {
    case Language::python: return "python";
    case Language::javascript: return "javascript";
    case Language::c_cpp: return "cpp";
    case Language::sql: return "sql";
    default: return "";
  }
}

/// `total` pairs over `languages`; every (total / broken)-th pair is broken,
/// rotating through languages and alternating the breakage kind.
inline std::vector<SyntheticPair> injection_set(std::size_t total, std::size_t broken,
                                                const std::vector<Language>& languages) {
  std::vector<SyntheticPair> out;
  const std::size_t stride = broken ? total / broken : total + 1;
  std::size_t made = 0;
  for (std::size_t i = 0; i < total; ++i) {
    SyntheticPair p;
    p.language = languages[(i + i / stride) % languages.size()];
    p.broken = broken && i % stride == stride - 1 && made < broken;
    const auto how = (made % 2) ? Breakage::stray_prose : Breakage::unbalanced_brace;
    const auto code = p.broken ? broken_code(p.language, i, how) : clean_code(p.language, i);
    if (p.broken) ++made;
    p.prompt = "Write a " + std::string(display_name(p.language)) + " snippet number " + std::to_string(i) + ".";
    p.response = "Here is the implementation:\n\n```" + fence_tag(p.language) + "\n" + code + "```\n\nIt runs as is.\n";
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace instforge::testing
