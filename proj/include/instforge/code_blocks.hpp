#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "instforge/language.hpp"

namespace instforge {

struct CodeBlock {
  Language language = Language::other;
  std::string info_string;  // as written after the fence
  std::string body;         // dedented by the fence's indentation
  int start_line = 1;       // 1-based line of the opening fence
  bool unterminated = false;

  int line_count() const;
};

/// Triple-backtick fenced blocks in document order. An unterminated fence
/// runs to the end of the text and adds a warning. Blocks whose body is
/// blank are skipped.
std::vector<CodeBlock> extract_blocks(std::string_view response, std::vector<std::string>* warnings = nullptr);

}  // namespace instforge
