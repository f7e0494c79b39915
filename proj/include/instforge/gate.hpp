#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "instforge/analyzers.hpp"
#include "instforge/code_blocks.hpp"
#include "instforge/lint.hpp"

namespace instforge {

struct BlockVerdict {
  CodeBlock block;
  LintReport report;
  std::vector<ToolRun> tools;
  bool skipped = false;
};

struct GateVerdict {
  bool pass = true;
  bool no_code = false;  // response had no fenced code
  std::vector<BlockVerdict> blocks;
  std::vector<std::string> warnings;

  /// {verdict, no_code, blocks: [{language, info_string, start_line,
  /// skipped, tools, report}], warnings}
  Json to_json() const;
};

class StaticGate {
 public:
  StaticGate(RuleConfig rules, AnalyzerRegistry registry, AnalyzeOptions options = {});

  /// Fails iff some block's report fails. Throws the first block error.
  GateVerdict gate_response(std::string_view response) const;

  /// Batches every block of every response through the analyzers at once.
  /// Results align with `responses`.
  std::vector<Outcome<GateVerdict>> gate_responses(const std::vector<std::string>& responses) const;

  const RuleConfig& rules() const noexcept { return rules_; }
  const AnalyzerRegistry& registry() const noexcept { return registry_; }

 private:
  RuleConfig rules_;
  AnalyzerRegistry registry_;
  AnalyzeOptions options_;
};

}  // namespace instforge
