#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "instforge/analyzers.hpp"
#include "instforge/code_blocks.hpp"
#include "instforge/lint.hpp"
#include "instforge/text.hpp"

namespace instforge::testing {

inline std::filesystem::path source_dir() { return INSTFORGE_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) {
  return source_dir() / "tests" / "fixtures" / "golden" / name;
}
inline std::filesystem::path config_file(const std::string& name) { return source_dir() / "config" / name; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& label) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("instforge-" + label + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

struct GoldenCase {
  std::string name;      // fixture stem, e.g. "b1_python"
  std::string recorded;  // recorded tool output file
  ToolKind tool;
};

inline const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"b1_python", "b1_python.pylint.json", ToolKind::pylint},
      {"b2_cpp", "b2_cpp.clang-tidy.txt", ToolKind::clang_tidy},
      {"b3_java", "b3_java.javac.txt", ToolKind::javac},
      {"b4_javascript", "b4_javascript.eslint.json", ToolKind::eslint},
      {"b5_sql", "b5_sql.sqlfluff.json", ToolKind::sqlfluff},
  };
  return cases;
}

/// First fenced block of the fixture response, normalized against its
/// recorded tool output with response-relative positions.
inline LintReport golden_report(const GoldenCase& c, const RuleConfig& rules) {
  const auto response = text::read_file(fixture(c.name + ".response.md"));
  const auto blocks = extract_blocks(response);
  if (blocks.empty()) return {};
  const auto& block = blocks.front();
  NormalizeContext ctx;
  ctx.language = block.language;
  ctx.block_lines = text::split_lines(block.body);
  ctx.line_offset = block.start_line;
  ctx.block_file = block_file_name(block);
  return LintReport::from_issues(
      normalize_native_output(text::read_file(fixture(c.recorded)), c.tool, rules, ctx));
}

}  // namespace instforge::testing
