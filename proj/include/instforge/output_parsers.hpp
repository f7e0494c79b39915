#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "instforge/templates.hpp"

namespace instforge {

struct ReverseQuestion {
  std::string language;
  std::string description;
  ProblemType problem_type = ProblemType::CodeGeneration;  // filled by the caller
  std::string lineage;                                      // source snippet id
};

// All parsers below throw Error(ParseFailure) with an excerpt of the input and
// never anything else. Headings match case-insensitively, with or without
// markdown emphasis, numbering or list markers; when a heading repeats the
// last occurrence wins.

/// Reads the final "[Programming Language]:" / "[Problem Description]:" pair.
/// The caller sets problem_type and lineage.
ReverseQuestion parse_reverse_output(std::string_view text);

/// Body after the final "Rewritten Question:" heading.
std::string parse_rewrite_output(std::string_view text);

/// Prompt Section body followed by Code Section body (a literal "None" code
/// section is dropped), both from the final "Complexity Results".
std::string parse_complicate_output(std::string_view text);

enum class KeywordDimension { Task, Instruction, Knowledge };

std::string_view to_string(KeywordDimension dim) noexcept;

/// Bracketed keywords after the dimension header ("[Task]:", "[Instructions]:",
/// "[Knowledge Points]:"). "[]" yields an empty list.
std::vector<std::string> parse_keyword_output(std::string_view text, KeywordDimension dim);

/// Body of the final numbered step (the "Final question output" step when it
/// is labelled).
std::string parse_backfeed_output(std::string_view text);

}  // namespace instforge
