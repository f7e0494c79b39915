#include "instforge/analyzers.hpp"

#include <atomic>
#include <fstream>
#include <regex>
#include <thread>
#include <unistd.h>

#include "instforge/digest.hpp"
#include "instforge/process.hpp"
#include "instforge/text.hpp"

namespace instforge {

Json ToolSpec::to_json() const {
  Json j;
  j["tool"] = to_string(kind);
  j["version"] = version;
  j["command"] = command;
  if (!env.empty()) j["env"] = env;
  if (!lang_args.empty()) j["lang_args"] = lang_args;
  j["stream"] = stream == OutputStream::out ? "stdout" : "stderr";
  j["required"] = required;
  j["batch"] = batch;
  j["timeout_s"] = timeout.count();
  return j;
}

AnalyzerRegistry AnalyzerRegistry::from_json(const Json& j, std::filesystem::path config_dir) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "analyzer lock must be an object of languages");
  AnalyzerRegistry reg;
  reg.config_dir_ = std::move(config_dir);
  reg.source_ = j;
  for (const auto& [lang_name, list] : j.items()) {
    if (lang_name.starts_with("_")) continue;  // comments
    const auto lang = normalize_language(lang_name);
    if (lang == Language::other || to_string(lang) != lang_name) {
      throw Error(ErrorCode::ConfigError, "unknown language '" + lang_name + "'");
    }
    if (!list.is_array()) throw Error(ErrorCode::ConfigError, lang_name + ": expected a list of tools");
    for (const auto& t : list) {
      try {
        ToolSpec spec;
        spec.kind = parse_tool_kind(t.at("tool").get<std::string>());
        spec.version = t.value("version", "");
        spec.command = t.at("command").get<std::vector<std::string>>();
        if (spec.command.empty()) throw Error(ErrorCode::ConfigError, lang_name + ": empty command");
        if (t.contains("env")) spec.env = t["env"].get<std::map<std::string, std::string>>();
        if (t.contains("lang_args")) spec.lang_args = t["lang_args"].get<std::map<std::string, std::vector<std::string>>>();
        const auto stream = t.value("stream", "stdout");
        if (stream != "stdout" && stream != "stderr") throw Error(ErrorCode::ConfigError, "stream must be stdout or stderr");
        spec.stream = stream == "stdout" ? OutputStream::out : OutputStream::err;
        spec.required = t.value("required", true);
        spec.batch = t.value("batch", false);
        spec.timeout = std::chrono::seconds(t.value("timeout_s", 120));
        reg.tools_[lang].push_back(std::move(spec));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, lang_name + ": " + e.what());
      }
    }
  }
  return reg;
}

AnalyzerRegistry AnalyzerRegistry::load(const std::filesystem::path& lockfile) {
  auto j = Json::parse(text::read_file(lockfile), nullptr, false, true);
  if (j.is_discarded()) throw Error(ErrorCode::ConfigError, lockfile.string() + ": not valid JSON");
  return from_json(j, std::filesystem::absolute(lockfile).parent_path());
}

const std::vector<ToolSpec>& AnalyzerRegistry::tools_for(Language lang) const {
  static const std::vector<ToolSpec> none;
  auto it = tools_.find(lang);
  return it == tools_.end() ? none : it->second;
}

bool AnalyzerRegistry::available(Language lang) const {
  const auto& tools = tools_for(lang);
  if (tools.empty()) return false;
  for (const auto& t : tools) {
    if (t.required && !find_executable(t.command.front())) return false;
  }
  return true;
}

std::string AnalyzerRegistry::digest() const { return canonical_digest(nlohmann::json::parse(source_.dump())); }

std::string block_file_name(const CodeBlock& block) {
  if (block.language == Language::java) {
    static const std::regex public_type(
        R"re(\bpublic\s+(?:(?:final|abstract|sealed|static|strictfp)\s+)*(?:class|interface|enum|record)\s+([A-Za-z_$][A-Za-z0-9_$]*))re");
    std::smatch m;
    if (std::regex_search(block.body, m, public_type)) return m[1].str() + ".java";
    return "Main.java";
  }
  return "block" + std::string(file_extension(block.language));
}

namespace {

std::string info_key(const CodeBlock& block) {
  auto info = text::trim(block.info_string);
  return text::to_lower(info.substr(0, info.find_first_of(" \t{")));
}

const std::vector<std::string>& lang_args_for(const ToolSpec& spec, const std::string& key) {
  static const std::vector<std::string> none;
  if (auto it = spec.lang_args.find(key); it != spec.lang_args.end()) return it->second;
  if (auto it = spec.lang_args.find("default"); it != spec.lang_args.end()) return it->second;
  return none;
}

struct Task {
  const ToolSpec* spec = nullptr;
  std::vector<std::size_t> blocks;
  std::string lang_key;
};

struct TaskOutcome {
  std::map<std::size_t, std::vector<LintIssue>> issues;
  std::map<std::size_t, Error> errors;
};

std::atomic<unsigned> g_dir_counter{0};

std::filesystem::path make_work_dir(const AnalyzeOptions& options) {
  auto base = options.work_dir.empty() ? std::filesystem::temp_directory_path() : options.work_dir;
  auto dir = base / ("instforge-gate-" + std::to_string(::getpid()) + "-" + std::to_string(g_dir_counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

/// Runs one tool over `indices`; returns issues per block or throws for the
/// whole invocation.
std::map<std::size_t, std::vector<LintIssue>> run_tool(const ToolSpec& spec, const std::vector<std::size_t>& indices,
                                                        const std::string& lang_key,
                                                        const std::vector<CodeBlock>& blocks, const RuleConfig& rules,
                                                        const std::filesystem::path& dir,
                                                        const std::filesystem::path& config_dir,
                                                        const AnalyzeOptions& options) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (auto i : indices) {
    auto rel = (std::filesystem::path("b" + std::to_string(i)) / block_file_name(blocks[i])).string();
    std::filesystem::create_directories(dir / std::filesystem::path(rel).parent_path());
    std::ofstream f(dir / rel, std::ios::binary);
    f << blocks[i].body << '\n';
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + (dir / rel).string());
    files.push_back(rel);
  }

  ProcessSpec ps;
  ps.cwd = dir;
  ps.env = spec.env;
  ps.timeout = spec.timeout;
  for (const auto& arg : spec.command) {
    if (arg == "{files}") {
      ps.argv.insert(ps.argv.end(), files.begin(), files.end());
    } else if (arg == "{lang_args}") {
      const auto& extra = lang_args_for(spec, lang_key);
      ps.argv.insert(ps.argv.end(), extra.begin(), extra.end());
    } else {
      ps.argv.push_back(text::replace_all(arg, "{config_dir}", config_dir.string()));
    }
  }

  const auto tool = std::string(to_string(spec.kind));
  auto res = run_process(ps);
  if (res.timed_out) throw Error(ErrorCode::AnalyzerCrash, tool + " timed out");
  const auto& output = spec.stream == OutputStream::out ? res.out : res.err;

  std::vector<NativeFinding> findings;
  try {
    findings = parse_native_output(output, spec.kind);
  } catch (const Error& e) {
    if (res.exit_code != 0) {
      throw Error(ErrorCode::AnalyzerCrash, tool + " exited " + std::to_string(res.exit_code) + ": " +
                                                excerpt(text::trim(res.err.empty() ? res.out : res.err)));
    }
    throw;
  }
  // Signals, or a nonzero exit with nothing to show for it, mean the tool died.
  if (res.exit_code >= 128 || (findings.empty() && res.exit_code != 0 && text::trim(output).empty())) {
    throw Error(ErrorCode::AnalyzerCrash, tool + " exited " + std::to_string(res.exit_code) + ": " +
                                              excerpt(text::trim(res.err.empty() ? res.out : res.err)));
  }

  std::map<std::size_t, std::vector<LintIssue>> out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto& block = blocks[indices[k]];
    std::vector<NativeFinding> mine;
    for (const auto& f : findings) {
      // A single-block run owns every finding, including ones in headers.
      if (indices.size() == 1 || same_file(f.file, files[k])) mine.push_back(f);
    }
    NormalizeContext ctx;
    ctx.language = block.language;
    ctx.block_lines = text::split_lines(block.body);
    ctx.line_offset = options.response_relative ? block.start_line : 0;
    ctx.block_file = files[k];
    out[indices[k]] = to_issues(mine, spec.kind, rules, ctx);
  }
  return out;
}

}  // namespace

std::vector<Outcome<BlockAnalysis>> analyze_blocks(const std::vector<CodeBlock>& blocks, const RuleConfig& rules,
                                                   const AnalyzerRegistry& registry, const AnalyzeOptions& options) {
  if (options.jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
  std::vector<BlockAnalysis> analyses(blocks.size());
  std::vector<std::optional<Error>> errors(blocks.size());
  std::vector<std::vector<std::vector<LintIssue>>> per_tool(blocks.size());

  // Group blocks per (language, tool, lang args) and cut batches.
  std::map<std::tuple<Language, std::size_t, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& tools = registry.tools_for(blocks[i].language);
    if (tools.empty()) {
      analyses[i].skipped = true;
      continue;
    }
    per_tool[i].resize(tools.size());
    for (std::size_t t = 0; t < tools.size(); ++t) {
      const auto& spec = tools[t];
      if (!find_executable(spec.command.front())) {
        if (spec.required && !errors[i]) {
          errors[i] = Error(ErrorCode::AnalyzerMissing, std::string(to_string(spec.kind)) + " (" +
                                                            spec.command.front() + ") not found on PATH");
        }
        continue;
      }
      analyses[i].tools.push_back({std::string(to_string(spec.kind)), spec.version});
      groups[{blocks[i].language, t, spec.lang_args.empty() ? std::string() : info_key(blocks[i])}].push_back(i);
    }
  }

  std::vector<Task> tasks;
  for (const auto& [key, members] : groups) {
    const auto& spec = registry.tools_for(std::get<0>(key))[std::get<1>(key)];
    const std::size_t chunk = spec.batch ? std::max<std::size_t>(1, options.max_batch) : 1;
    for (std::size_t s = 0; s < members.size(); s += chunk) {
      Task task;
      task.spec = &spec;
      task.lang_key = std::get<2>(key);
      task.blocks.assign(members.begin() + static_cast<std::ptrdiff_t>(s),
                         members.begin() + static_cast<std::ptrdiff_t>(std::min(members.size(), s + chunk)));
      tasks.push_back(std::move(task));
    }
  }

  const auto root = tasks.empty() ? std::filesystem::path() : make_work_dir(options);
  std::vector<TaskOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < tasks.size(); n = next++) {
      const auto& task = tasks[n];
      auto& result = outcomes[n];
      const auto dir = root / ("t" + std::to_string(n));
      try {
        result.issues = run_tool(*task.spec, task.blocks, task.lang_key, blocks, rules, dir, registry.config_dir(),
                                 options);
      } catch (const Error& e) {
        if (task.blocks.size() == 1) {
          result.errors.emplace(task.blocks.front(), e);
          continue;
        }
        // Retry block by block so one pathological block cannot sink the batch.
        for (auto i : task.blocks) {
          try {
            auto single = run_tool(*task.spec, {i}, task.lang_key, blocks, rules, dir / ("r" + std::to_string(i)),
                                   registry.config_dir(), options);
            result.issues[i] = std::move(single[i]);
          } catch (const Error& e2) {
            result.errors.emplace(i, e2);
          }
        }
      } catch (const std::exception& e) {
        for (auto i : task.blocks) result.errors.emplace(i, Error(ErrorCode::AnalyzerCrash, e.what()));
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.jobs), tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  bool any_error = false;
  for (std::size_t n = 0; n < tasks.size(); ++n) {
    const auto tool_index = [&] {
      const auto& tools = registry.tools_for(blocks[tasks[n].blocks.front()].language);
      return static_cast<std::size_t>(tasks[n].spec - tools.data());
    }();
    for (auto& [i, issues] : outcomes[n].issues) per_tool[i][tool_index] = std::move(issues);
    for (auto& [i, e] : outcomes[n].errors) {
      any_error = true;
      if (!errors[i]) errors[i] = e;
    }
  }
  if (!root.empty() && !options.keep_temp && !any_error) {
    std::error_code ec;
    std::filesystem::remove_all(root, ec);
  }

  std::vector<Outcome<BlockAnalysis>> out;
  out.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (errors[i]) {
      out.emplace_back(*errors[i]);
      continue;
    }
    std::vector<LintIssue> issues;
    for (auto& part : per_tool[i]) issues.insert(issues.end(), part.begin(), part.end());
    analyses[i].report = LintReport::from_issues(std::move(issues));
    out.emplace_back(std::move(analyses[i]));
  }
  return out;
}

BlockAnalysis analyze_block(const CodeBlock& block, const RuleConfig& rules, const AnalyzerRegistry& registry,
                            const AnalyzeOptions& options) {
  auto results = analyze_blocks({block}, rules, registry, options);
  return results.front().value();
}

}  // namespace instforge
