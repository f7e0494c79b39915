#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instforge/jsonl.hpp"
#include "instforge/language.hpp"

namespace instforge {

enum class Severity { error, info };
enum class ReportStatus { pass, fail };

std::string_view to_string(Severity s) noexcept;
std::string_view to_string(ReportStatus s) noexcept;

struct LintPosition {
  int start_line = 1;
  int end_line = 1;
  friend bool operator==(const LintPosition&, const LintPosition&) = default;
};

struct LintIssue {
  std::string rule_name;
  std::string message;
  LintPosition position;
  Severity severity = Severity::info;
  std::string content;   // omitted from JSON when file_path is set
  std::string language;  // display name
  std::optional<std::string> file_path;

  Json to_json() const;
  static LintIssue from_json(const Json& j);
  friend bool operator==(const LintIssue&, const LintIssue&) = default;
};

struct LintReport {
  std::vector<LintIssue> issues;
  ReportStatus status = ReportStatus::pass;

  /// status = fail iff some issue is error-severity.
  static LintReport from_issues(std::vector<LintIssue> issues);
  Json to_json() const;
  static LintReport from_json(const Json& j);
};

enum class ToolKind { pylint, eslint, checkstyle, javac, clang_tidy, sqlfluff };

std::string_view to_string(ToolKind tool) noexcept;
/// Throws ConfigError.
ToolKind parse_tool_kind(std::string_view name);

enum class Tier { disabled, error, info };
enum class DefaultPolicy { native, error, info };

struct ToolRules {
  std::map<std::string, Tier, std::less<>> tiers;
  DefaultPolicy default_policy = DefaultPolicy::native;
};

/// Per-tool rule tiers. Rule keys match any of an issue's names; a key
/// ending in '*' matches by prefix, and exact keys win over prefixes.
class RuleConfig {
 public:
  RuleConfig() = default;

  /// {"<tool>": {"disabled": [...], "error": [...], "info": [...],
  /// "default": "native"|"error"|"info"}}. Throws ConfigError, including
  /// when a rule is listed twice for one tool.
  static RuleConfig from_json(const Json& j);
  static RuleConfig load(const std::filesystem::path& path);

  void set(ToolKind tool, std::string rule, Tier tier);
  void set_default(ToolKind tool, DefaultPolicy policy);

  /// Tier for a finding; `native_error` applies under the native policy.
  Tier tier_for(ToolKind tool, const std::vector<std::string>& names, bool native_error) const;

  /// Stable digest of the configuration.
  std::string digest() const;

 private:
  std::map<ToolKind, ToolRules> tools_;
};

/// Tool-independent view of one native finding.
struct NativeFinding {
  std::string file;
  std::vector<std::string> names;  // primary rule name first, then aliases
  std::string message;
  int line = 1;
  int end_line = 1;
  bool native_error = false;
};

/// Throws OutputParseFailure with a raw excerpt.
std::vector<NativeFinding> parse_native_output(std::string_view output, ToolKind tool);

struct NormalizeContext {
  Language language = Language::other;
  /// Block text, for the `content` field.
  std::vector<std::string> block_lines;
  /// Added to block line numbers (the fence line, for response-relative
  /// positions); 0 keeps positions block-relative.
  int line_offset = 0;
  /// Path the analyzer saw for the block; findings in other files carry
  /// file_path and tool-native lines. Empty treats every finding as the block's.
  std::string block_file;
};

/// True if a finding reported for `reported` refers to `block_file`.
bool same_file(std::string_view reported, std::string_view block_file) noexcept;

std::vector<LintIssue> to_issues(const std::vector<NativeFinding>& findings, ToolKind tool,
                                 const RuleConfig& config, const NormalizeContext& ctx);

/// parse_native_output followed by to_issues. Disabled rules are omitted.
std::vector<LintIssue> normalize_native_output(std::string_view output, ToolKind tool, const RuleConfig& config,
                                               const NormalizeContext& ctx = {});

}  // namespace instforge
