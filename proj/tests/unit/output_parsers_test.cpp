#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "instforge/error.hpp"
#include "instforge/output_parsers.hpp"
#include "instforge/templates.hpp"

using namespace instforge;

namespace {

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST(ReverseOutput, ReadsFinalFields) {
  const auto q = parse_reverse_output(
      "1. Analyze the code\n...\n6. Output\n[Programming Language]: Python\n[Problem Description]: Implement X");
  EXPECT_EQ(q.language, "Python");
  EXPECT_EQ(q.description, "Implement X");
}

TEST(ReverseOutput, LastBlockWins) {
  const auto q = parse_reverse_output(
      "[Programming Language]: Java\n[Problem Description]: first\n\n"
      "**[Programming Language]:** SQL\n**[Problem Description]:**\nsecond\nline two\n");
  EXPECT_EQ(q.language, "SQL");
  EXPECT_EQ(q.description, "second\nline two");
}

TEST(ReverseOutput, MissingMarkersFail) {
  EXPECT_EQ(code_of([] { parse_reverse_output("just prose"); }), ErrorCode::ParseFailure);
}

TEST(RewriteOutput, SectionSixBody) {
  const std::string text =
      "1. Original Question: a\n2. Analysis: b\n3. Method: c\n4. Draft: d\n5. Check: e\n"
      "6. Rewritten Question:\nWrite a function that parses dates.\n";
  EXPECT_EQ(parse_rewrite_output(text), "Write a function that parses dates.");
  EXPECT_EQ(code_of([] { parse_rewrite_output("no heading here"); }), ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { parse_rewrite_output("6. Rewritten Question:\n   \n"); }), ErrorCode::ParseFailure);
}

TEST(ComplicateOutput, NoneCodeSectionIsDropped) {
  const std::string text =
      "Method: Constraint Addition\nComplexity Results\nPrompt Section: Sort the list in O(n log n).\n"
      "Code Section: None\n";
  EXPECT_EQ(parse_complicate_output(text), "Sort the list in O(n log n).");
}

TEST(ComplicateOutput, PromptThenCode) {
  const std::string text =
      "Complexity Results\nPrompt Section:\nFix the bug below.\nCode Section:\n```python\nx = 1\n```\n";
  const auto out = parse_complicate_output(text);
  const auto p = out.find("Fix the bug below.");
  const auto c = out.find("```python\nx = 1\n```");
  ASSERT_NE(p, std::string::npos);
  ASSERT_NE(c, std::string::npos);
  EXPECT_LT(p, c);
  EXPECT_EQ(code_of([] { parse_complicate_output("Prompt Section: x"); }), ErrorCode::ParseFailure);
}

TEST(KeywordOutput, PublishedExamples) {
  EXPECT_EQ(parse_keyword_output("[Task]:[String Validation]", KeywordDimension::Task),
            std::vector<std::string>{"String Validation"});
  EXPECT_TRUE(parse_keyword_output("Output:\n[Instructions]:[]", KeywordDimension::Instruction).empty());
  EXPECT_EQ(parse_keyword_output("[Knowledge Points]:[Modulo Operation][Number Processing][Data Swapping]",
                                 KeywordDimension::Knowledge),
            (std::vector<std::string>{"Modulo Operation", "Number Processing", "Data Swapping"}));
  EXPECT_EQ(code_of([] { parse_keyword_output("[Task]:[x]", KeywordDimension::Knowledge); }),
            ErrorCode::ParseFailure);
}

TEST(BackfeedOutput, FinalStepBody) {
  std::string text;
  for (int i = 1; i <= 7; ++i) text += std::to_string(i) + ". Step " + std::to_string(i) + " notes\n";
  text += "8. Final question output:\nImplement an LRU cache in Java.\n";
  EXPECT_EQ(parse_backfeed_output(text), "Implement an LRU cache in Java.");
  EXPECT_EQ(code_of([] { parse_backfeed_output("no steps at all"); }), ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { parse_backfeed_output("1. a\n2. b\n3.   \n"); }), ErrorCode::ParseFailure);
}

TEST(Parsers, ArbitraryInputYieldsValueOrParseFailure) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> atoms = {
      "[Programming Language]:", "[Problem Description]:", "Rewritten Question:", "Complexity Results",
      "Prompt Section:", "Code Section:", "None", "[Task]:", "[Instructions]:", "[Knowledge Points]:",
      "[", "]", "[]", "\n", "1. ", "8. ", "**", "```", "\r\n", " ", "x", "\xC3\xA9", "\xFF", "#"};
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const auto n = rng() % 24;
    for (std::size_t k = 0; k < n; ++k) s += atoms[rng() % atoms.size()];
    auto check = [&](auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::ParseFailure) << s;
      } catch (...) {
        FAIL() << "non-library exception for: " << s;
      }
    };
    check([&] { parse_reverse_output(s); });
    check([&] { parse_rewrite_output(s); });
    check([&] { parse_complicate_output(s); });
    check([&] { parse_keyword_output(s, KeywordDimension::Task); });
    check([&] { parse_keyword_output(s, KeywordDimension::Instruction); });
    check([&] { parse_keyword_output(s, KeywordDimension::Knowledge); });
    check([&] { parse_backfeed_output(s); });
  }
}
