#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "instforge/gate.hpp"
#include "instforge/gateway.hpp"
#include "instforge/keyword_graph.hpp"
#include "instforge/records.hpp"
#include "instforge/rng.hpp"
#include "instforge/templates.hpp"

namespace instforge {

/// Run configuration. Precedence when assembled by the CLI: flag >
/// environment (INSTFORGE_*) > config file > these defaults.
struct PipelineConfig {
  std::string model = "gpt-4o-2024-08-06";
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  double generation_temperature = 0.7;
  double extraction_temperature = 0.0;
  double quality_temperature = 0.7;
  double complexity_temperature = 0.0;
  double response_temperature = 0.7;
  int max_tokens = 2048;
  RetryPolicy retry;
  int request_timeout_s = 120;

  std::uint64_t seed = 42;
  Mode mode = Mode::replay;
  std::filesystem::path cassette;
  int jobs = 4;
  bool resume = true;

  std::filesystem::path corpus;
  std::filesystem::path snippets;  // when set, run-all skips snippet extraction
  std::size_t snippets_per_document = 1;
  std::filesystem::path vocab_task;
  std::filesystem::path vocab_instruction;
  std::filesystem::path vocab_knowledge;

  std::map<ProblemType, double> problem_type_weights;  // empty: uniform
  std::size_t combinations = 12;
  std::size_t min_keywords = 4;
  std::size_t max_keywords = 8;
  double dedup_threshold = 0.8;
  double quality_threshold = kDefaultKeepThreshold;

  std::filesystem::path rules;
  std::filesystem::path analyzers;
  bool keep_temp = false;

  /// Relative paths resolve against the file's directory. Throws ConfigError.
  static PipelineConfig load(const std::filesystem::path& path);
  void apply_json(const Json& j, const std::filesystem::path& base_dir);
  /// INSTFORGE_SEED, INSTFORGE_MODE, INSTFORGE_CASSETTE, INSTFORGE_JOBS,
  /// INSTFORGE_MODEL, INSTFORGE_ENDPOINT, INSTFORGE_RULES, INSTFORGE_ANALYZERS.
  void apply_env();
  Json to_json() const;
};

/// Draws a problem type from `weights` (uniform when empty).
ProblemType draw_problem_type(const std::map<ProblemType, double>& weights, SeededRng& rng);

/// Strict triple parsing per line, falling back to association phrasing for
/// lines the strict form rejects.
TripleParse parse_relation_answer(std::string_view text, const NodeSet& nodes);

/// Fail iff some block fails; zero blocks pass with no_code set.
GateVerdict gate_pair(const InstructionRecord& record, const StaticGate& gate);

/// Problems found re-rendering each lineage entry and recomputing its
/// request digests (and, with a cassette, looking them up). Empty when the
/// chain replays.
std::vector<std::string> verify_lineage(const InstructionRecord& record, const Cassette* cassette = nullptr);

struct StagePaths {
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path rejects;   // default: <output stem>.rejects.jsonl
  std::filesystem::path manifest;  // default: <output stem>.manifest.json
};

/// Fills the default rejects/manifest paths next to `output`.
StagePaths stage_paths(std::filesystem::path input, std::filesystem::path output);

struct RunResult {
  std::vector<StageManifest> manifests;
  std::filesystem::path dataset;
  std::filesystem::path report;
};

class Pipeline {
 public:
  /// Without a transport, live and record modes post to config.endpoint with
  /// the credential read from the environment variable config.api_key_env.
  /// Replay without a cassette fails each call with CassetteMiss.
  explicit Pipeline(PipelineConfig config, std::shared_ptr<Transport> transport = nullptr);
  ~Pipeline();

  const PipelineConfig& config() const noexcept { return config_; }
  const Gateway& gateway() const noexcept { return *gateway_; }

  StageManifest extract_snippets(const StagePaths& paths);

  StageManifest generate_reverse(const StagePaths& paths);
  StageManifest complicate(const StagePaths& paths);
  StageManifest rewrite(const StagePaths& paths);
  /// generate -> complicate -> rewrite -> quality -> complexity, stage files
  /// in `dir`.
  std::vector<StageManifest> run_reverse_flow(const std::filesystem::path& snippets, const std::filesystem::path& dir);

  StageManifest extract_keywords(const StagePaths& paths);
  StageManifest merge_vocabulary(const StagePaths& paths);
  StageManifest combine_keywords(const StagePaths& paths);
  StageManifest build_knowledge_graph(const StagePaths& paths);
  StageManifest dedup(const StagePaths& paths);
  StageManifest generate_backfeed(const StagePaths& paths);
  /// keywords -> vocabulary -> combinations -> kg -> dedup -> backfeed ->
  /// quality -> complexity, stage files in `dir`.
  std::vector<StageManifest> run_backfeed_flow(const std::filesystem::path& reverse_records,
                                               const std::filesystem::path& dir);

  StageManifest score(const StagePaths& paths);
  StageManifest assess_complexity(const StagePaths& paths);
  StageManifest respond(const StagePaths& paths);
  StageManifest gate(const StagePaths& paths);
  /// Concatenates record files.
  StageManifest merge(const std::vector<std::filesystem::path>& inputs, const StagePaths& paths);
  /// {prompt, response, metadata} lines.
  StageManifest export_dataset(const StagePaths& paths);

  /// Every stage into `dir`, then the dataset, manifests.jsonl and report.
  RunResult run_all(const std::filesystem::path& dir);

 private:
  struct Impl;
  PipelineConfig config_;
  std::shared_ptr<Cassette> cassette_;
  std::unique_ptr<Gateway> gateway_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace instforge
