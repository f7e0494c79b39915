// instforge: command-line driver for the dataset pipeline.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "instforge/gate.hpp"
#include "instforge/mock_responder.hpp"
#include "instforge/pipeline.hpp"
#include "instforge/report.hpp"
#include "instforge/text.hpp"

namespace fs = std::filesystem;
using namespace instforge;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string cassette;
  std::optional<int> jobs;
  std::string rules;
  std::string analyzers;
  std::string model;
  std::string endpoint;
  bool force = false;
  bool mock_llm = false;
};

struct StageArgs {
  std::string in;
  std::string out;
  std::string rejects;
};

/// file < environment < flags
PipelineConfig assemble(const Overrides& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : PipelineConfig::load(o.config);
  cfg.apply_env();
  if (o.seed) cfg.seed = *o.seed;
  if (!o.mode.empty()) cfg.mode = parse_mode(o.mode);
  if (!o.cassette.empty()) cfg.cassette = o.cassette;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (!o.rules.empty()) cfg.rules = o.rules;
  if (!o.analyzers.empty()) cfg.analyzers = o.analyzers;
  if (!o.model.empty()) cfg.model = o.model;
  if (!o.endpoint.empty()) cfg.endpoint = o.endpoint;
  if (o.force) cfg.resume = false;
  if (cfg.jobs < 1) throw Error(ErrorCode::ConfigError, "--jobs must be >= 1");
  return cfg;
}

std::unique_ptr<Pipeline> make_pipeline(const Overrides& o) {
  auto cfg = assemble(o);
  std::shared_ptr<Transport> transport;
  if (o.mock_llm) {
    const bool have_vocab = !cfg.vocab_task.empty() && !cfg.vocab_instruction.empty() && !cfg.vocab_knowledge.empty();
    transport = std::make_shared<MockTransport>(
        have_vocab ? MockVocabulary::load(cfg.vocab_task, cfg.vocab_instruction, cfg.vocab_knowledge)
                   : MockVocabulary::builtin());
  }
  return std::make_unique<Pipeline>(std::move(cfg), std::move(transport));
}

StagePaths paths_for(const StageArgs& a) {
  auto p = stage_paths(a.in, a.out);
  if (!a.rejects.empty()) p.rejects = a.rejects;
  return p;
}

/// Intermediate file next to `out`: <dir>/<stem>.<label>.jsonl
fs::path sibling(const fs::path& out, std::string_view label) {
  return out.parent_path() / (out.stem().string() + "." + std::string(label) + ".jsonl");
}

void print(const StageManifest& m) {
  std::printf("%-11s in=%zu out=%zu rejected=%zu (%s) -> %s\n", m.stage.c_str(), m.counts.in, m.counts.out,
              m.counts.rejected, m.unit.c_str(), m.output_path.c_str());
}

CLI::App* stage_command(CLI::App& app, const char* name, const char* help, StageArgs& args) {
  auto* cmd = app.add_subcommand(name, help);
  cmd->add_option("--in", args.in, "Input JSONL")->required();
  cmd->add_option("--out", args.out, "Output JSONL")->required();
  cmd->add_option("--rejects", args.rejects, "Quarantine JSONL (default: <out stem>.rejects.jsonl)");
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic code-instruction dataset pipeline"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "Pipeline config JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--mode", o.mode, "live | record | replay")->check(CLI::IsMember({"live", "record", "replay"}));
  app.add_option("--cassette", o.cassette, "Cassette JSONL for record/replay");
  app.add_option("--jobs", o.jobs, "Parallel workers");
  app.add_option("--rules", o.rules, "Lint rule tiers");
  app.add_option("--analyzers", o.analyzers, "Analyzer lockfile");
  app.add_option("--model", o.model, "Model name");
  app.add_option("--endpoint", o.endpoint, "Chat-completions URL");
  app.add_flag("--force", o.force, "Rerun stages even when their manifest is current");
  app.add_flag("--mock-llm", o.mock_llm, "Answer model calls with the built-in offline responder");

  StageArgs snippets_args, reverse_args, keywords_args, kg_args, backfeed_args, score_args, complexity_args,
      respond_args, gate_args;
  auto* snippets_cmd = stage_command(app, "extract-snippets", "Sample code windows from a corpus", snippets_args);
  auto* reverse_cmd = stage_command(app, "gen-reverse", "Reverse construction: generate, complicate, rewrite",
                                    reverse_args);
  auto* keywords_cmd = stage_command(app, "extract-keywords", "Task/instruction/knowledge keywords per record",
                                     keywords_args);
  auto* kg_cmd = stage_command(app, "build-kg", "Vocabulary, combinations, knowledge graph and group dedup", kg_args);
  auto* backfeed_cmd = stage_command(app, "gen-backfeed", "Backfeed construction from keyword groups", backfeed_args);
  auto* score_cmd = stage_command(app, "score", "Seven-criteria quality filter", score_args);
  auto* complexity_cmd = stage_command(app, "complexity", "Difficulty score per prompt", complexity_args);
  auto* respond_cmd = stage_command(app, "respond", "Model response per prompt", respond_args);

  auto* gate_cmd = app.add_subcommand("gate", "Static analysis gate over responses");
  std::string gate_response;
  gate_cmd->add_option("--in", gate_args.in, "Records with responses");
  gate_cmd->add_option("--out", gate_args.out, "Passing records");
  gate_cmd->add_option("--rejects", gate_args.rejects, "Failing records");
  gate_cmd->add_option("--response", gate_response, "Gate one markdown response file and print the verdict")
      ->check(CLI::ExistingFile);

  auto* stats_cmd = app.add_subcommand("stats", "Counts and distributions for a run directory");
  std::string stats_dir;
  bool stats_json = false;
  stats_cmd->add_option("--run-dir", stats_dir, "Directory holding manifests.jsonl")->required();
  stats_cmd->add_flag("--json", stats_json, "Print JSON instead of text");

  auto* run_cmd = app.add_subcommand("run-all", "Every stage into one directory");
  std::string run_dir;
  run_cmd->add_option("--out", run_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats_cmd) {
      const auto report = load_report(stats_dir);
      std::cout << (stats_json ? report.to_json().dump(2) + "\n" : report.to_text());
      return 0;
    }
    if (*gate_cmd) {
      const auto cfg = assemble(o);
      if (!gate_response.empty()) {
        if (cfg.rules.empty() || cfg.analyzers.empty()) {
          throw Error(ErrorCode::ConfigError, "gate needs --rules and --analyzers (or a config)");
        }
        AnalyzeOptions opts;
        opts.jobs = cfg.jobs;
        const StaticGate gate(RuleConfig::load(cfg.rules), AnalyzerRegistry::load(cfg.analyzers), opts);
        const auto verdict = gate.gate_response(text::read_file(gate_response));
        std::cout << verdict.to_json().dump(2) << "\n";
        return verdict.pass ? 0 : 3;
      }
      if (gate_args.in.empty() || gate_args.out.empty()) {
        throw Error(ErrorCode::InvalidArgument, "gate needs --in and --out, or --response");
      }
      print(make_pipeline(o)->gate(paths_for(gate_args)));
      return 0;
    }

    auto pipeline = make_pipeline(o);
    if (*run_cmd) {
      const auto result = pipeline->run_all(run_dir);
      for (const auto& m : result.manifests) print(m);
      std::cout << "dataset: " << result.dataset.string() << "\nreport: " << result.report.string() << "\n";
      return 0;
    }
    if (*snippets_cmd) print(pipeline->extract_snippets(paths_for(snippets_args)));
    if (*reverse_cmd) {
      const fs::path out = reverse_args.out;
      print(pipeline->generate_reverse(stage_paths(reverse_args.in, sibling(out, "generate"))));
      print(pipeline->complicate(stage_paths(sibling(out, "generate"), sibling(out, "complicate"))));
      auto last = paths_for(reverse_args);
      last.input = sibling(out, "complicate");
      print(pipeline->rewrite(last));
    }
    if (*keywords_cmd) print(pipeline->extract_keywords(paths_for(keywords_args)));
    if (*kg_cmd) {
      const fs::path out = kg_args.out;
      print(pipeline->merge_vocabulary(stage_paths(kg_args.in, sibling(out, "vocabulary"))));
      print(pipeline->combine_keywords(stage_paths(sibling(out, "vocabulary"), sibling(out, "combinations"))));
      print(pipeline->build_knowledge_graph(stage_paths(sibling(out, "combinations"), sibling(out, "kg"))));
      auto last = paths_for(kg_args);
      last.input = sibling(out, "kg");
      print(pipeline->dedup(last));
    }
    if (*backfeed_cmd) print(pipeline->generate_backfeed(paths_for(backfeed_args)));
    if (*score_cmd) print(pipeline->score(paths_for(score_args)));
    if (*complexity_cmd) print(pipeline->assess_complexity(paths_for(complexity_args)));
    if (*respond_cmd) print(pipeline->respond(paths_for(respond_args)));
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
