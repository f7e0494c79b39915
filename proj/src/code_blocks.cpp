#include "instforge/code_blocks.hpp"

#include <algorithm>

#include "instforge/text.hpp"

namespace instforge {

int CodeBlock::line_count() const { return static_cast<int>(text::split_lines(body).size()); }

namespace {

struct Fence {
  std::size_t indent = 0;
  std::size_t ticks = 0;
  std::string_view info;
};

bool parse_fence(std::string_view line, Fence& fence) {
  std::size_t indent = 0;
  while (indent < line.size() && line[indent] == ' ') ++indent;
  std::size_t ticks = 0;
  while (indent + ticks < line.size() && line[indent + ticks] == '`') ++ticks;
  if (ticks < 3) return false;
  auto info = text::trim(line.substr(indent + ticks));
  if (info.find('`') != std::string_view::npos) return false;
  fence = {indent, ticks, info};
  return true;
}

bool closes(std::string_view line, const Fence& open) {
  auto s = text::ltrim(line);
  std::size_t ticks = 0;
  while (ticks < s.size() && s[ticks] == '`') ++ticks;
  return ticks >= open.ticks && text::trim(s.substr(ticks)).empty();
}

std::string dedent(const std::string& line, std::size_t indent) {
  std::size_t n = 0;
  while (n < indent && n < line.size() && line[n] == ' ') ++n;
  return line.substr(n);
}

}  // namespace

std::vector<CodeBlock> extract_blocks(std::string_view response, std::vector<std::string>* warnings) {
  std::vector<CodeBlock> blocks;
  const auto lines = text::split_lines(response);
  std::size_t i = 0;
  while (i < lines.size()) {
    Fence fence;
    if (!parse_fence(lines[i], fence)) {
      ++i;
      continue;
    }
    CodeBlock block;
    block.info_string = std::string(fence.info);
    block.language = normalize_language(fence.info);
    block.start_line = static_cast<int>(i + 1);
    std::vector<std::string> body;
    std::size_t j = i + 1;
    for (; j < lines.size() && !closes(lines[j], fence); ++j) body.push_back(dedent(lines[j], fence.indent));
    block.unterminated = j >= lines.size();
    if (block.unterminated && warnings) {
      warnings->push_back("unterminated code fence at line " + std::to_string(block.start_line));
    }
    block.body = text::join(body, "\n");
    if (!text::trim(block.body).empty()) blocks.push_back(std::move(block));
    i = j + 1;
  }
  return blocks;
}

}  // namespace instforge
