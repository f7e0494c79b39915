#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "instforge/code_blocks.hpp"
#include "instforge/error.hpp"
#include "instforge/jsonl.hpp"
#include "instforge/lint.hpp"

namespace instforge {

enum class OutputStream { out, err };

/// One analyzer invocation recipe. Command placeholders: "{files}" (all block
/// files of a batch, or the single file), "{config_dir}", "{lang_args}"
/// (lang_args entry for the fence's info string, else "default").
struct ToolSpec {
  ToolKind kind = ToolKind::pylint;
  std::string version;  // pinned version, copied into report metadata
  std::vector<std::string> command;
  std::map<std::string, std::string> env;
  std::map<std::string, std::vector<std::string>> lang_args;
  OutputStream stream = OutputStream::out;
  bool required = true;
  bool batch = false;
  std::chrono::seconds timeout{120};

  Json to_json() const;
};

/// Tool recipes per language, loaded from the analyzer lockfile.
class AnalyzerRegistry {
 public:
  /// {"<language tag>": [ToolSpec...]}. Throws ConfigError.
  static AnalyzerRegistry from_json(const Json& j, std::filesystem::path config_dir);
  static AnalyzerRegistry load(const std::filesystem::path& lockfile);

  const std::vector<ToolSpec>& tools_for(Language lang) const;
  const std::filesystem::path& config_dir() const noexcept { return config_dir_; }
  /// Languages whose required tools are all on PATH.
  bool available(Language lang) const;
  std::string digest() const;

 private:
  std::map<Language, std::vector<ToolSpec>> tools_;
  std::filesystem::path config_dir_;
  Json source_;
};

struct ToolRun {
  std::string tool;
  std::string version;
  friend bool operator==(const ToolRun&, const ToolRun&) = default;
};

struct BlockAnalysis {
  LintReport report;
  std::vector<ToolRun> tools;
  bool skipped = false;  // language without an analyzer row
};

struct AnalyzeOptions {
  int jobs = 1;
  std::filesystem::path work_dir;  // empty: system temp directory
  bool keep_temp = false;
  std::size_t max_batch = 200;
  /// Add the fence line to block positions (response-relative lines).
  bool response_relative = true;
};

/// Analyzes many blocks, batching per tool where the recipe allows it.
/// Results align with `blocks`. Per-block failures (AnalyzerMissing,
/// AnalyzerCrash, OutputParseFailure) are carried, never thrown.
std::vector<Outcome<BlockAnalysis>> analyze_blocks(const std::vector<CodeBlock>& blocks, const RuleConfig& rules,
                                                   const AnalyzerRegistry& registry, const AnalyzeOptions& options);

/// Single block; throws the carried error.
BlockAnalysis analyze_block(const CodeBlock& block, const RuleConfig& rules, const AnalyzerRegistry& registry,
                            const AnalyzeOptions& options = {});

/// File name the analyzer sees for a block (Java files are named after the
/// public class).
std::string block_file_name(const CodeBlock& block);

}  // namespace instforge
