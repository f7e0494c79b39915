#include "instforge/output_parsers.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "instforge/error.hpp"
#include "instforge/text.hpp"

namespace instforge {

namespace {

[[noreturn]] void fail(std::string_view what, std::string_view input) {
  throw Error(ErrorCode::ParseFailure, std::string(what) + " in: " + excerpt(text::trim(input)));
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_markup(char c) { return c == '#' || c == '*' || c == '_' || c == '>' || c == '-' || c == '+' || c == '`'; }

std::string_view skip_markup(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && (is_markup(s[i]) || s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

/// Leading "#", emphasis, list bullets and one "N." / "N)" step number.
std::string_view strip_heading_prefix(std::string_view line, int* step = nullptr) {
  auto s = skip_markup(line);
  std::size_t i = 0;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i > 0 && i <= 6 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
    if (step) *step = std::stoi(std::string(s.substr(0, i)));
    s = skip_markup(s.substr(i + 1));
  }
  return s;
}

/// If `line` is a heading for `label`, the inline text after it.
std::optional<std::string_view> match_heading(std::string_view line, std::string_view label) {
  auto s = strip_heading_prefix(line);
  if (!s.empty() && s.front() == '[') s = skip_markup(s.substr(1));
  if (s.size() < label.size() || !text::iequals(s.substr(0, label.size()), label)) return std::nullopt;
  s.remove_prefix(label.size());
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ']' || s[i] == '*' || s[i] == '_' || s[i] == ' ')) ++i;
  if (i < s.size() && s[i] == ':') {
    ++i;
    while (i < s.size() && (s[i] == '*' || s[i] == '_')) ++i;
    return text::trim(s.substr(i));
  }
  if (text::trim(s.substr(i)).empty()) return std::string_view{};
  return std::nullopt;
}

struct Hit {
  std::size_t line = 0;
  std::string inline_text;
};

std::optional<Hit> last_heading(const std::vector<std::string>& lines, std::string_view label,
                                std::size_t from = 0, std::size_t to = std::string::npos) {
  to = std::min(to, lines.size());
  for (std::size_t i = to; i-- > from;) {
    if (auto rest = match_heading(lines[i], label)) return Hit{i, std::string(*rest)};
  }
  return std::nullopt;
}

/// Inline text plus lines (from, to), common indentation removed.
std::string section_body(const Hit& hit, const std::vector<std::string>& lines, std::size_t to) {
  std::vector<std::string> body;
  if (!hit.inline_text.empty()) body.push_back(hit.inline_text);
  std::size_t indent = std::string::npos;
  for (std::size_t i = hit.line + 1; i < to; ++i) {
    const auto& l = lines[i];
    if (text::trim(l).empty()) continue;
    indent = std::min(indent, l.find_first_not_of(" \t"));
  }
  for (std::size_t i = hit.line + 1; i < to; ++i) {
    const auto& l = lines[i];
    body.push_back(text::trim(l).empty() ? std::string() : l.substr(std::min(indent, l.size())));
  }
  return std::string(text::trim(text::join(body, "\n")));
}

std::string strip_emphasis(std::string_view s) {
  s = text::trim(s);
  auto edge = [](char c) { return c == '*' || c == '_' || c == '`' || c == '[' || c == ']' || c == ' '; };
  while (!s.empty() && edge(s.front())) s.remove_prefix(1);
  while (!s.empty() && edge(s.back())) s.remove_suffix(1);
  return std::string(s);
}

bool is_none_marker(std::string_view s) {
  auto v = text::to_lower(strip_emphasis(s));
  while (!v.empty() && (v.back() == '.' || v.back() == '"' || v.back() == '\'')) v.pop_back();
  while (!v.empty() && (v.front() == '"' || v.front() == '\'')) v.erase(v.begin());
  return v == "none";
}

}  // namespace

ReverseQuestion parse_reverse_output(std::string_view input) {
  const auto lines = text::split_lines(input);
  auto desc = last_heading(lines, "problem description");
  if (!desc) fail("no [Problem Description] marker", input);
  auto lang = last_heading(lines, "programming language", 0, desc->line);
  if (!lang) lang = last_heading(lines, "programming language");
  if (!lang) fail("no [Programming Language] marker", input);

  ReverseQuestion q;
  q.language = strip_emphasis(lang->inline_text);
  std::size_t end = lines.size();
  if (lang->line > desc->line) end = lang->line;
  q.description = section_body(*desc, lines, end);
  if (q.language.empty()) fail("empty programming language", input);
  if (q.description.empty()) fail("empty problem description", input);
  return q;
}

std::string parse_rewrite_output(std::string_view input) {
  const auto lines = text::split_lines(input);
  auto hit = last_heading(lines, "rewritten question");
  if (!hit) fail("no Rewritten Question heading", input);
  auto body = section_body(*hit, lines, lines.size());
  if (body.empty()) fail("empty rewrite", input);
  return body;
}

std::string parse_complicate_output(std::string_view input) {
  const auto lines = text::split_lines(input);
  auto results = last_heading(lines, "complexity results");
  if (!results) fail("no Complexity Results section", input);
  const std::size_t start = results->line + 1;

  auto prompt = last_heading(lines, "prompt section", start);
  if (!prompt) fail("no Prompt Section", input);
  auto code = last_heading(lines, "code section", start);
  auto verify = last_heading(lines, "completeness verification", start);

  auto end_of = [&](std::size_t line) {
    std::size_t end = lines.size();
    for (const auto& other : {prompt, code, verify}) {
      if (other && other->line > line) end = std::min(end, other->line);
    }
    return end;
  };

  std::string prompt_body = section_body(*prompt, lines, end_of(prompt->line));
  if (prompt_body.empty()) fail("empty Prompt Section", input);
  std::string code_body = code ? section_body(*code, lines, end_of(code->line)) : std::string();
  if (code_body.empty() || is_none_marker(code_body)) return prompt_body;
  if (code->line < prompt->line) return code_body + "\n\n" + prompt_body;
  return prompt_body + "\n\n" + code_body;
}

std::string_view to_string(KeywordDimension dim) noexcept {
  switch (dim) {
    case KeywordDimension::Task: return "task";
    case KeywordDimension::Instruction: return "instruction";
    case KeywordDimension::Knowledge: return "knowledge";
  }
  return "task";
}

std::vector<std::string> parse_keyword_output(std::string_view input, KeywordDimension dim) {
  std::vector<std::string_view> headers;
  switch (dim) {
    case KeywordDimension::Task: headers = {"[task]"}; break;
    case KeywordDimension::Instruction: headers = {"[instructions]", "[instruction]"}; break;
    case KeywordDimension::Knowledge: headers = {"[knowledge points]", "[knowledge point]", "[knowledge]"}; break;
  }
  std::size_t at = std::string_view::npos;
  std::size_t header_len = 0;
  for (auto h : headers) {
    auto pos = text::ifind_last(input, h);
    if (pos != std::string_view::npos && (at == std::string_view::npos || pos > at)) {
      at = pos;
      header_len = h.size();
    }
  }
  if (at == std::string_view::npos) fail("no keyword header for " + std::string(to_string(dim)), input);

  auto rest = input.substr(at + header_len);
  auto skip = [&rest](std::string_view chars) {
    while (!rest.empty() && chars.find(rest.front()) != std::string_view::npos) rest.remove_prefix(1);
  };
  skip("*_ \t");
  if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
  skip("*_ \t");

  std::vector<std::string> keywords;
  if (rest.empty() || rest.front() != '[') {
    // Unbracketed payload: the remainder of the line is one keyword.
    auto line = rest.substr(0, rest.find('\n'));
    auto kw = strip_emphasis(line);
    if (!kw.empty()) keywords.push_back(kw);
    return keywords;
  }
  while (!rest.empty() && rest.front() == '[') {
    auto close = rest.find(']');
    auto nl = rest.find('\n');
    if (close == std::string_view::npos || (nl != std::string_view::npos && nl < close)) break;
    auto kw = strip_emphasis(rest.substr(1, close - 1));
    if (!kw.empty() && std::find(keywords.begin(), keywords.end(), kw) == keywords.end()) {
      keywords.push_back(kw);
    }
    rest.remove_prefix(close + 1);
    skip(" \t,;*_");
  }
  return keywords;
}

std::string parse_backfeed_output(std::string_view input) {
  const auto lines = text::split_lines(input);

  if (auto hit = last_heading(lines, "final question output")) {
    auto body = section_body(*hit, lines, lines.size());
    if (body.empty()) fail("empty final question", input);
    return body;
  }

  // Unlabelled: the highest-numbered top-level step, last occurrence.
  int best = 0;
  std::size_t best_line = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.empty() || l[0] == ' ' || l[0] == '\t') continue;
    int step = 0;
    strip_heading_prefix(l, &step);
    if (step > 0 && step >= best) {
      best = step;
      best_line = i;
    }
  }
  if (best == 0) fail("no numbered steps", input);
  Hit hit{best_line, std::string(text::trim(strip_heading_prefix(lines[best_line])))};
  auto body = section_body(hit, lines, lines.size());
  if (body.empty()) fail("empty final step", input);
  return body;
}

}  // namespace instforge
