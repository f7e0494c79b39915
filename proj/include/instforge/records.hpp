#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instforge/error.hpp"
#include "instforge/jsonl.hpp"
#include "instforge/scoring.hpp"
#include "instforge/templates.hpp"

namespace instforge {

enum class Flow { reverse, backfeed };

std::string_view to_string(Flow flow) noexcept;
Flow parse_flow(std::string_view name);

/// One rendered-and-sent prompt: enough to re-render the template and
/// recompute every request digest it produced.
struct LineageEntry {
  std::string stage;
  std::vector<std::string> inputs;  // ids consumed
  std::string kind;                 // TemplateKind tag
  TemplateParams params;
  std::string params_digest;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 0;
  std::vector<std::string> request_digests;  // one per sample_index

  Json to_json() const;
  static LineageEntry from_json(const Json& j);
};

/// Stage order per flow; lineage stages must follow it.
const std::vector<std::string>& flow_stages(Flow flow);

struct InstructionRecord {
  std::string id;
  Flow flow = Flow::reverse;
  ProblemType problem_type = ProblemType::CodeGeneration;
  std::string language = "other";  // normalized tag
  std::string prompt;
  std::optional<std::string> response;
  std::vector<LineageEntry> lineage;
  std::optional<ScoreCard> scorecard;
  std::optional<Json> gate;

  Json to_json() const;
  /// Throws ParseFailure.
  static InstructionRecord from_json(const Json& j);
  /// Stages appear in flow order and a response implies every prompt stage.
  bool lineage_valid() const;
};

/// A quarantined input: {stage, reason "Code@stage", excerpt, record}.
struct Reject {
  std::string stage;
  std::string reason;
  std::string excerpt;
  Json record;

  Json to_json() const;
  static Reject from_error(std::string_view stage, const Error& error, Json record);
  static Reject with_reason(std::string_view stage, std::string_view reason, std::string_view detail, Json record);
};

std::string reject_reason(std::string_view code, std::string_view stage);

struct StageCounts {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t rejected = 0;
};

struct StageManifest {
  std::string stage;
  std::string input_path;
  std::string output_path;
  std::string rejects_path;
  std::uint64_t seed = 0;
  std::string unit = "record";  // what the counts count
  StageCounts counts;
  std::string params_digest;
  std::string output_digest;  // sha256 of the output file
  /// Named tallies, e.g. "reject_reasons" or "gate_failures_by_language".
  std::map<std::string, std::map<std::string, std::size_t>> breakdown;

  bool conserved() const noexcept { return counts.in == counts.out + counts.rejected; }
  Json to_json() const;
  static StageManifest from_json(const Json& j);
};

}  // namespace instforge
