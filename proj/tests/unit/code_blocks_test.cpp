#include <gtest/gtest.h>

#include "instforge/analyzers.hpp"
#include "instforge/code_blocks.hpp"
#include "support.hpp"

using namespace instforge;

TEST(CodeBlocks, FencesInOrderWithLanguageAndLine) {
  const std::string md = "intro\n```Python\nprint(1)\n```\ntext\n```js\nlet x = 1;\n```\n";
  const auto blocks = extract_blocks(md);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].language, Language::python);
  EXPECT_EQ(blocks[0].info_string, "Python");
  EXPECT_EQ(blocks[0].body, "print(1)");
  EXPECT_EQ(blocks[0].start_line, 2);
  EXPECT_EQ(blocks[1].language, Language::javascript);
  EXPECT_EQ(blocks[1].start_line, 6);
  EXPECT_EQ(blocks[1].line_count(), 1);
}

TEST(CodeBlocks, IndentedFenceIsDedented) {
  const std::string md = "1. Query:\n   ```sql\n   SELECT 1\n     FROM t\n   ```\n";
  const auto blocks = extract_blocks(md);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].body, "SELECT 1\n  FROM t");
}

TEST(CodeBlocks, UnterminatedFenceRunsToEndWithWarning) {
  std::vector<std::string> warnings;
  const auto blocks = extract_blocks("```cpp\nint main() {}\n", &warnings);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_TRUE(blocks[0].unterminated);
  EXPECT_EQ(blocks[0].body, "int main() {}");
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(CodeBlocks, BlankAndUntaggedBlocks) {
  const auto blocks = extract_blocks("```python\n\n   \n```\n```\nplain\n```\n");
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].language, Language::other);
  EXPECT_TRUE(extract_blocks("no code here").empty());
}

TEST(CodeBlocks, GoldenResponsesHaveTheirLanguages) {
  const std::vector<std::pair<std::string, Language>> expected = {{"b1_python", Language::python},
                                                                  {"b2_cpp", Language::c_cpp},
                                                                  {"b3_java", Language::java},
                                                                  {"b4_javascript", Language::javascript},
                                                                  {"b5_sql", Language::sql}};
  for (const auto& [name, lang] : expected) {
    const auto blocks = extract_blocks(text::read_file(instforge::testing::fixture(name + ".response.md")));
    ASSERT_FALSE(blocks.empty()) << name;
    EXPECT_EQ(blocks.front().language, lang) << name;
  }
}

TEST(CodeBlocks, JavaFileNamedAfterPublicClass) {
  CodeBlock b;
  b.language = Language::java;
  b.body = "import java.util.*;\n\npublic class TaskManager {\n}\n";
  EXPECT_EQ(block_file_name(b), "TaskManager.java");
  b.language = Language::python;
  EXPECT_EQ(block_file_name(b), "block.py");
}
