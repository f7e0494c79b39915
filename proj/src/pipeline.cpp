#include "instforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>
#include <variant>

#include "instforge/code_blocks.hpp"
#include "instforge/corpus.hpp"
#include "instforge/digest.hpp"
#include "instforge/http_transport.hpp"
#include "instforge/language.hpp"
#include "instforge/output_parsers.hpp"
#include "instforge/report.hpp"
#include "instforge/rng.hpp"
#include "instforge/text.hpp"

namespace instforge {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

namespace {

fs::path resolve(const Json& v, const fs::path& base) {
  fs::path p = v.get<std::string>();
  if (p.empty() || p.is_absolute()) return p;
  return (base / p).lexically_normal();
}

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, std::string(what) + " must be an object");
}

const std::set<std::string, std::less<>> kConfigSections = {"llm", "run", "inputs", "generation", "gate"};

}  // namespace

void PipelineConfig::apply_json(const Json& j, const fs::path& base) {
  require_object(j, "config");
  for (const auto& [key, _] : j.items()) {
    if (!key.starts_with("_") && !kConfigSections.contains(key)) {
      throw Error(ErrorCode::ConfigError, "unknown config section '" + key + "'");
    }
  }
  try {
    if (j.contains("llm")) {
      const auto& l = j["llm"];
      require_object(l, "llm");
      model = l.value("model", model);
      endpoint = l.value("endpoint", endpoint);
      api_key_env = l.value("api_key_env", api_key_env);
      max_tokens = l.value("max_tokens", max_tokens);
      request_timeout_s = l.value("request_timeout_s", request_timeout_s);
      if (l.contains("temperature")) {
        const auto& t = l["temperature"];
        require_object(t, "llm.temperature");
        generation_temperature = t.value("generation", generation_temperature);
        extraction_temperature = t.value("extraction", extraction_temperature);
        quality_temperature = t.value("quality", quality_temperature);
        complexity_temperature = t.value("complexity", complexity_temperature);
        response_temperature = t.value("response", response_temperature);
      }
      if (l.contains("retry")) {
        const auto& r = l["retry"];
        require_object(r, "llm.retry");
        retry.max_attempts = r.value("max_attempts", retry.max_attempts);
        retry.base_delay = std::chrono::milliseconds(r.value("base_delay_ms", retry.base_delay.count()));
        retry.max_delay = std::chrono::milliseconds(r.value("max_delay_ms", retry.max_delay.count()));
      }
    }
    if (j.contains("run")) {
      const auto& r = j["run"];
      require_object(r, "run");
      seed = r.value("seed", seed);
      if (r.contains("mode")) mode = parse_mode(r["mode"].get<std::string>());
      if (r.contains("cassette")) cassette = resolve(r["cassette"], base);
      jobs = r.value("jobs", jobs);
      resume = r.value("resume", resume);
    }
    if (j.contains("inputs")) {
      const auto& in = j["inputs"];
      require_object(in, "inputs");
      if (in.contains("corpus")) corpus = resolve(in["corpus"], base);
      if (in.contains("snippets")) snippets = resolve(in["snippets"], base);
      snippets_per_document = in.value("snippets_per_document", snippets_per_document);
      if (in.contains("vocab")) {
        const auto& v = in["vocab"];
        require_object(v, "inputs.vocab");
        if (v.contains("task")) vocab_task = resolve(v["task"], base);
        if (v.contains("instruction")) vocab_instruction = resolve(v["instruction"], base);
        if (v.contains("knowledge")) vocab_knowledge = resolve(v["knowledge"], base);
      }
    }
    if (j.contains("generation")) {
      const auto& g = j["generation"];
      require_object(g, "generation");
      if (g.contains("problem_type_weights")) {
        problem_type_weights.clear();
        for (const auto& [name, w] : g["problem_type_weights"].items()) {
          const double weight = w.get<double>();
          if (weight < 0) throw Error(ErrorCode::ConfigError, "negative weight for " + name);
          problem_type_weights[parse_problem_type(name)] = weight;
        }
      }
      combinations = g.value("combinations", combinations);
      min_keywords = g.value("min_keywords", min_keywords);
      max_keywords = g.value("max_keywords", max_keywords);
      dedup_threshold = g.value("dedup_threshold", dedup_threshold);
      quality_threshold = g.value("quality_threshold", quality_threshold);
    }
    if (j.contains("gate")) {
      const auto& g = j["gate"];
      require_object(g, "gate");
      if (g.contains("rules")) rules = resolve(g["rules"], base);
      if (g.contains("analyzers")) analyzers = resolve(g["analyzers"], base);
      keep_temp = g.value("keep_temp", keep_temp);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (jobs < 1) throw Error(ErrorCode::ConfigError, "jobs must be >= 1");
  if (min_keywords < 2 || min_keywords > max_keywords) {
    throw Error(ErrorCode::ConfigError, "need 2 <= min_keywords <= max_keywords");
  }
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  Json j;
  try {
    j = Json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  PipelineConfig cfg;
  cfg.apply_json(j, fs::absolute(path).parent_path());
  return cfg;
}

void PipelineConfig::apply_env() {
  const auto get = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  try {
    if (auto v = get("INSTFORGE_SEED")) seed = std::stoull(*v);
    if (auto v = get("INSTFORGE_JOBS")) jobs = std::stoi(*v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "INSTFORGE_SEED and INSTFORGE_JOBS must be integers");
  }
  if (auto v = get("INSTFORGE_MODE")) mode = parse_mode(*v);
  if (auto v = get("INSTFORGE_CASSETTE")) cassette = *v;
  if (auto v = get("INSTFORGE_MODEL")) model = *v;
  if (auto v = get("INSTFORGE_ENDPOINT")) endpoint = *v;
  if (auto v = get("INSTFORGE_RULES")) rules = *v;
  if (auto v = get("INSTFORGE_ANALYZERS")) analyzers = *v;
  if (jobs < 1) throw Error(ErrorCode::ConfigError, "jobs must be >= 1");
}

Json PipelineConfig::to_json() const {
  Json weights = Json::object();
  for (const auto& [t, w] : problem_type_weights) weights[std::string(slug(t))] = w;
  return Json{
      {"llm",
       {{"model", model},
        {"endpoint", endpoint},
        {"api_key_env", api_key_env},
        {"max_tokens", max_tokens},
        {"request_timeout_s", request_timeout_s},
        {"temperature",
         {{"generation", generation_temperature},
          {"extraction", extraction_temperature},
          {"quality", quality_temperature},
          {"complexity", complexity_temperature},
          {"response", response_temperature}}},
        {"retry",
         {{"max_attempts", retry.max_attempts},
          {"base_delay_ms", retry.base_delay.count()},
          {"max_delay_ms", retry.max_delay.count()}}}}},
      {"run",
       {{"seed", seed}, {"mode", to_string(mode)}, {"cassette", cassette.string()}, {"jobs", jobs}, {"resume", resume}}},
      {"inputs",
       {{"corpus", corpus.string()},
        {"snippets", snippets.string()},
        {"snippets_per_document", snippets_per_document},
        {"vocab",
         {{"task", vocab_task.string()},
          {"instruction", vocab_instruction.string()},
          {"knowledge", vocab_knowledge.string()}}}}},
      {"generation",
       {{"problem_type_weights", weights},
        {"combinations", combinations},
        {"min_keywords", min_keywords},
        {"max_keywords", max_keywords},
        {"dedup_threshold", dedup_threshold},
        {"quality_threshold", quality_threshold}}},
      {"gate", {{"rules", rules.string()}, {"analyzers", analyzers.string()}, {"keep_temp", keep_temp}}},
  };
}

// ---------------------------------------------------------------- helpers

ProblemType draw_problem_type(const std::map<ProblemType, double>& weights, SeededRng& rng) {
  double total = 0.0;
  for (const auto& [_, w] : weights) total += w;
  if (weights.empty() || total <= 0.0) return kAllProblemTypes[rng.uniform(0, kAllProblemTypes.size() - 1)];
  double r = rng.unit() * total;
  ProblemType last = kAllProblemTypes.front();
  for (auto t : kAllProblemTypes) {
    auto it = weights.find(t);
    if (it == weights.end() || it->second <= 0.0) continue;
    last = t;
    if (r < it->second) return t;
    r -= it->second;
  }
  return last;
}

TripleParse parse_relation_answer(std::string_view text, const NodeSet& nodes) {
  TripleParse out;
  std::size_t line_no = 0;
  for (const auto& raw : text::split_lines(text)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    std::optional<Error> strict;
    try {
      if (auto t = parse_triple_line(line, nodes)) {
        out.triples.push_back(std::move(*t));
        continue;
      }
    } catch (const Error& e) {
      strict = e;
    }
    auto assoc = parse_associations(line, nodes);
    if (!assoc.triples.empty()) {
      for (auto& t : assoc.triples) out.triples.push_back(std::move(t));
    } else if (strict) {
      out.failures.push_back({line_no, std::string(line), *strict});
    }
  }
  return out;
}

GateVerdict gate_pair(const InstructionRecord& record, const StaticGate& gate) {
  if (!record.response) throw Error(ErrorCode::InvalidArgument, "record " + record.id + " has no response");
  return gate.gate_response(*record.response);
}

namespace {

Json raw_params_key(const TemplateParams& params) {
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return nlohmann::json{{"kind", "raw"}, {"params", p}};
}

}  // namespace

std::vector<std::string> verify_lineage(const InstructionRecord& record, const Cassette* cassette) {
  std::vector<std::string> problems;
  if (!record.lineage_valid()) problems.push_back(record.id + ": lineage stages out of flow order");
  for (const auto& e : record.lineage) {
    const std::string where = record.id + "/" + e.stage;
    std::string prompt;
    try {
      if (e.kind == "raw") {
        auto it = e.params.find("prompt");
        if (it == e.params.end()) throw Error(ErrorCode::MissingPlaceholder, "prompt");
        prompt = it->second;
        if (canonical_digest(raw_params_key(e.params)) != e.params_digest) {
          problems.push_back(where + ": params digest mismatch");
        }
      } else {
        const auto rendered = render(TemplateKind::parse(e.kind), e.params);
        prompt = rendered.text;
        if (rendered.params_digest != e.params_digest) problems.push_back(where + ": params digest mismatch");
      }
    } catch (const Error& err) {
      problems.push_back(where + ": " + err.what());
      continue;
    }
    if (e.request_digests.empty()) problems.push_back(where + ": no request digests");
    for (std::size_t i = 0; i < e.request_digests.size(); ++i) {
      const CompletionRequest req{prompt, e.model, e.temperature, e.max_tokens, static_cast<int>(i)};
      if (req.digest() != e.request_digests[i]) {
        problems.push_back(where + ": request digest " + std::to_string(i) + " mismatch");
      } else if (cassette != nullptr && !cassette->lookup(e.request_digests[i])) {
        problems.push_back(where + ": request " + std::to_string(i) + " not in cassette");
      }
    }
  }
  return problems;
}

StagePaths stage_paths(fs::path input, fs::path output) {
  StagePaths p;
  p.input = std::move(input);
  p.output = std::move(output);
  const auto stem = p.output.parent_path() / p.output.stem();
  p.rejects = stem.string() + ".rejects.jsonl";
  p.manifest = stem.string() + ".manifest.json";
  return p;
}

// ---------------------------------------------------------------- stage runner

namespace {

struct StageBody {
  std::vector<Json> outputs;
  std::vector<Reject> rejects;
  std::size_t in = 0;
  std::map<std::string, std::map<std::string, std::size_t>> breakdown;
};

using ItemResult = std::variant<Json, Reject>;

/// Manifest paths are shown relative to the manifest's directory when they
/// live there, so identical runs in different directories match.
std::string display_path(const fs::path& p, const fs::path& manifest) {
  if (p.empty()) return "";
  const auto dir = fs::absolute(manifest).parent_path().lexically_normal();
  const auto abs = fs::absolute(p).lexically_normal();
  if (abs.parent_path() == dir) return abs.filename().string();
  return p.string();
}

std::string file_sha(const fs::path& p) {
  if (!fs::exists(p)) throw Error(ErrorCode::FileNotFound, p.string());
  return sha256_hex(text::read_file(p));
}

std::vector<Json> parse_lines(const fs::path& input, std::string_view stage, StageBody& body) {
  std::vector<Json> values;
  for (auto& line : read_jsonl(input)) {
    ++body.in;
    if (!line.value) {
      body.rejects.push_back(Reject::with_reason(stage, "ParseFailure", "line " + std::to_string(line.line_no) + ": " + line.error,
                                                 Json{{"line", line.line_no}, {"raw", excerpt(line.raw, 400)}}));
      continue;
    }
    values.push_back(std::move(*line.value));
  }
  return values;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

StageManifest run_stage(const PipelineConfig& cfg, std::string_view stage, const StagePaths& paths,
                        const std::vector<fs::path>& inputs, const Json& params, std::string unit,
                        const std::function<StageBody()>& run) {
  nlohmann::json input_shas = nlohmann::json::array();
  for (const auto& in : inputs) input_shas.push_back(file_sha(in));
  nlohmann::json key = {{"stage", stage}, {"inputs", input_shas}, {"params", nlohmann::json::parse(params.dump())},
                        {"seed", cfg.seed}};
  const auto params_digest = canonical_digest(key);

  if (cfg.resume && fs::exists(paths.manifest) && fs::exists(paths.output) && fs::exists(paths.rejects)) {
    try {
      auto previous = StageManifest::from_json(Json::parse(text::read_file(paths.manifest)));
      if (previous.params_digest == params_digest && file_sha(paths.output) == previous.output_digest) {
        return previous;
      }
    } catch (const std::exception&) {
      // Unreadable manifest: rerun the stage.
    }
  }

  StageBody body = run();

  StageManifest m;
  m.stage = std::string(stage);
  std::string shown_inputs;
  for (const auto& in : inputs) {
    if (!shown_inputs.empty()) shown_inputs += ",";
    shown_inputs += display_path(in, paths.manifest);
  }
  m.input_path = shown_inputs;
  m.output_path = display_path(paths.output, paths.manifest);
  m.rejects_path = display_path(paths.rejects, paths.manifest);
  m.seed = cfg.seed;
  m.unit = std::move(unit);
  m.counts = {body.in, body.outputs.size(), body.rejects.size()};
  m.params_digest = params_digest;
  m.breakdown = std::move(body.breakdown);
  for (const auto& r : body.rejects) ++m.breakdown["reject_reasons"][r.reason];

  const auto out_text = dump_jsonl(body.outputs);
  std::vector<Json> reject_json;
  reject_json.reserve(body.rejects.size());
  for (const auto& r : body.rejects) reject_json.push_back(r.to_json());
  m.output_digest = sha256_hex(out_text);

  ensure_parent(paths.output);
  ensure_parent(paths.rejects);
  ensure_parent(paths.manifest);
  text::write_file_atomic(paths.output, out_text);
  text::write_file_atomic(paths.rejects, dump_jsonl(reject_json));
  text::write_file_atomic(paths.manifest, m.to_json().dump(2) + "\n");
  return m;
}

/// Runs `fn` on every item with `jobs` workers; results keep input order.
/// Library errors become rejects carrying the input.
template <typename Fn>
void map_records(int jobs, std::string_view stage, const std::vector<Json>& items, StageBody& body, Fn fn) {
  std::vector<std::optional<ItemResult>> results(items.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        results[i] = fn(items[i]);
      } catch (const Error& e) {
        results[i] = Reject::from_error(stage, e, items[i]);
      } catch (const nlohmann::json::exception& e) {
        results[i] = Reject::with_reason(stage, "ParseFailure", e.what(), items[i]);
      } catch (const std::exception& e) {
        results[i] = Reject::with_reason(stage, "InternalError", e.what(), items[i]);
      }
    }
  };
  {
    const auto n = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(jobs), items.size()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& r : results) {
    if (auto* out = std::get_if<Json>(&*r)) {
      body.outputs.push_back(std::move(*out));
    } else {
      body.rejects.push_back(std::move(std::get<Reject>(*r)));
    }
  }
}

struct Call {
  std::vector<std::string> texts;
  LineageEntry entry;
};

Call call_llm(const Gateway& gw, const PipelineConfig& cfg, std::string_view stage, std::vector<std::string> inputs,
              const std::string& prompt, std::string kind, const TemplateParams& params, std::string params_digest,
              double temperature, int samples = 1) {
  Call c;
  c.entry.stage = std::string(stage);
  c.entry.inputs = std::move(inputs);
  c.entry.kind = std::move(kind);
  c.entry.params = params;
  c.entry.params_digest = std::move(params_digest);
  c.entry.model = cfg.model;
  c.entry.temperature = temperature;
  c.entry.max_tokens = cfg.max_tokens;
  for (int i = 0; i < samples; ++i) {
    const CompletionRequest req{prompt, cfg.model, temperature, cfg.max_tokens, i};
    c.entry.request_digests.push_back(req.digest());
    c.texts.push_back(gw.complete(req, cfg.mode).text);
  }
  return c;
}

Call call_template(const Gateway& gw, const PipelineConfig& cfg, std::string_view stage,
                   std::vector<std::string> inputs, const TemplateKind& kind, const TemplateParams& params,
                   double temperature) {
  const auto rendered = render(kind, params);
  return call_llm(gw, cfg, stage, std::move(inputs), rendered.text, kind.tag(), params, rendered.params_digest,
                  temperature);
}

std::string keyword_list(const std::vector<std::string>& keywords) {
  std::string out;
  for (const auto& k : keywords) {
    if (!out.empty()) out += ", ";
    out += "[" + k + "]";
  }
  return out;
}

std::string relation_phrase(Relation r) {
  return r == Relation::Unrelated ? "unrelated to" : std::string(to_string(r));
}

std::string detect_language(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    const auto lang = normalize_language(w);
    if (lang != Language::other) return std::string(to_string(lang));
  }
  return std::string(to_string(Language::other));
}

NodeKind vocab_kind(std::string_view name) {
  if (name == "task") return NodeKind::Task;
  if (name == "instruction") return NodeKind::Instruction;
  if (name == "knowledge") return NodeKind::KnowledgePoint;
  return parse_node_kind(name);
}

std::string_view vocab_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Task: return "task";
    case NodeKind::Instruction: return "instruction";
    case NodeKind::KnowledgePoint: return "knowledge";
  }
  return "task";
}

}  // namespace

// ---------------------------------------------------------------- pipeline

struct Pipeline::Impl {
  std::once_flag gate_once;
  std::unique_ptr<StaticGate> gate;

  const StaticGate& static_gate(const PipelineConfig& cfg) {
    std::call_once(gate_once, [&] {
      if (cfg.rules.empty() || cfg.analyzers.empty()) {
        throw Error(ErrorCode::ConfigError, "gate needs both a rules file and an analyzer lockfile");
      }
      AnalyzeOptions opts;
      opts.jobs = cfg.jobs;
      opts.keep_temp = cfg.keep_temp;
      gate = std::make_unique<StaticGate>(RuleConfig::load(cfg.rules), AnalyzerRegistry::load(cfg.analyzers), opts);
    });
    return *gate;
  }
};

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  if (!config_.cassette.empty()) {
    if (config_.mode == Mode::record) ensure_parent(config_.cassette);
    cassette_ = std::make_shared<Cassette>(config_.cassette, config_.mode == Mode::record);
  }
  if (!transport && config_.mode != Mode::replay) {
    HttpEndpoint ep;
    ep.url = config_.endpoint;
    if (const char* key = std::getenv(config_.api_key_env.c_str())) ep.api_key = key;
    ep.timeout = std::chrono::seconds(config_.request_timeout_s);
    transport = std::make_shared<HttpTransport>(std::move(ep));
  }
  GatewayOptions opts;
  opts.retry = config_.retry;
  gateway_ = std::make_unique<Gateway>(std::move(opts), std::move(transport), cassette_);
}

Pipeline::~Pipeline() = default;

StageManifest Pipeline::extract_snippets(const StagePaths& paths) {
  const Json params{{"snippets_per_document", config_.snippets_per_document}};
  return run_stage(config_, "snippets", paths, {paths.input}, params, "window", [&] {
    StageBody body;
    auto load = load_corpus(paths.input);
    for (const auto& r : load.rejects) {
      ++body.in;
      body.rejects.push_back(Reject::with_reason("snippets", "ParseFailure", r.reason,
                                                 Json{{"line", r.line_no}, {"raw", r.raw}}));
    }
    std::vector<std::string> skipped;
    const auto sampled = sample_corpus(load.documents, config_.snippets_per_document,
                                       derive_seed(config_.seed, "snippets"), &skipped);
    for (const auto& id : skipped) {
      ++body.in;
      body.rejects.push_back(Reject::with_reason("snippets", "DocumentTooShort", id, Json{{"source_id", id}}));
    }
    std::set<std::string> seen;
    for (const auto& s : sampled) {
      ++body.in;
      if (seen.insert(normalized_snippet_text(s.text)).second) {
        body.outputs.push_back(to_json(s));
      } else {
        body.rejects.push_back(Reject::with_reason("snippets", "Duplicate", s.id, to_json(s)));
      }
    }
    return body;
  });
}

StageManifest Pipeline::generate_reverse(const StagePaths& paths) {
  Json weights = Json::object();
  for (const auto& [t, w] : config_.problem_type_weights) weights[std::string(slug(t))] = w;
  const Json params{{"model", config_.model}, {"temperature", config_.generation_temperature},
                    {"max_tokens", config_.max_tokens}, {"weights", weights}};
  return run_stage(config_, "generate", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "generate", body);
    map_records(config_.jobs, "generate", items, body, [&](const Json& item) -> ItemResult {
      const auto snippet = snippet_from_json(item);
      SeededRng rng(derive_seed(config_.seed, "generate/" + snippet.id));
      const auto type = draw_problem_type(config_.problem_type_weights, rng);
      const TemplateParams tp{{"code_snippet", snippet.text}};
      auto call = call_template(*gateway_, config_, "generate", {snippet.id}, TemplateKind::reverse_question(type), tp,
                                config_.generation_temperature);
      const auto q = parse_reverse_output(call.texts.front());
      InstructionRecord rec;
      rec.id = "rev:" + snippet.id;
      rec.flow = Flow::reverse;
      rec.problem_type = type;
      auto lang = normalize_language(q.language);
      if (lang == Language::other) lang = snippet.language;
      rec.language = std::string(to_string(lang));
      rec.prompt = q.description;
      rec.lineage.push_back(std::move(call.entry));
      return rec.to_json();
    });
    return body;
  });
}

StageManifest Pipeline::complicate(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.generation_temperature},
                    {"max_tokens", config_.max_tokens}};
  return run_stage(config_, "complicate", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "complicate", body);
    map_records(config_.jobs, "complicate", items, body, [&](const Json& item) -> ItemResult {
      auto rec = InstructionRecord::from_json(item);
      SeededRng rng(derive_seed(config_.seed, "complicate/" + rec.id));
      const auto method = kAllComplicationMethods[rng.uniform(0, kAllComplicationMethods.size() - 1)];
      const TemplateParams tp{{"method", std::string(display_name(method))}, {"prompt", rec.prompt}};
      auto call = call_template(*gateway_, config_, "complicate", {rec.id}, TemplateKind::plain(TemplateId::complicate),
                                tp, config_.generation_temperature);
      rec.prompt = parse_complicate_output(call.texts.front());
      rec.lineage.push_back(std::move(call.entry));
      return rec.to_json();
    });
    return body;
  });
}

StageManifest Pipeline::rewrite(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.generation_temperature},
                    {"max_tokens", config_.max_tokens}};
  return run_stage(config_, "rewrite", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "rewrite", body);
    map_records(config_.jobs, "rewrite", items, body, [&](const Json& item) -> ItemResult {
      auto rec = InstructionRecord::from_json(item);
      auto call = call_template(*gateway_, config_, "rewrite", {rec.id}, TemplateKind::plain(TemplateId::text_rewrite),
                                {{"question", rec.prompt}}, config_.generation_temperature);
      rec.prompt = parse_rewrite_output(call.texts.front());
      rec.lineage.push_back(std::move(call.entry));
      return rec.to_json();
    });
    return body;
  });
}

StageManifest Pipeline::score(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.quality_temperature},
                    {"max_tokens", config_.max_tokens}, {"threshold", config_.quality_threshold}};
  return run_stage(config_, "quality", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "quality", body);
    map_records(config_.jobs, "quality", items, body, [&](const Json& item) -> ItemResult {
      auto rec = InstructionRecord::from_json(item);
      const ScoringSettings settings{config_.model, config_.quality_temperature, config_.max_tokens};
      const TemplateParams tp{{"prompt", rec.prompt}};
      const auto rendered = render(TemplateKind::plain(TemplateId::quality_filter), tp);
      LineageEntry entry;
      entry.stage = "quality";
      entry.inputs = {rec.id};
      entry.kind = rendered.kind.tag();
      entry.params = tp;
      entry.params_digest = rendered.params_digest;
      entry.model = config_.model;
      entry.temperature = config_.quality_temperature;
      entry.max_tokens = config_.max_tokens;
      for (const auto& req : scoring_requests(rec.prompt, settings)) entry.request_digests.push_back(req.digest());
      rec.scorecard = score_prompt(rec.prompt, *gateway_, config_.mode, settings);
      rec.lineage.push_back(std::move(entry));
      if (rec.scorecard->final_score < config_.quality_threshold) {
        return Reject::with_reason("quality", "LowScore",
                                   "final score " + std::to_string(rec.scorecard->final_score) + " below threshold",
                                   rec.to_json());
      }
      return rec.to_json();
    });
    return body;
  });
}

StageManifest Pipeline::assess_complexity(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.complexity_temperature},
                    {"max_tokens", config_.max_tokens}};
  return run_stage(config_, "complexity", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "complexity", body);
    map_records(config_.jobs, "complexity", items, body, [&](const Json& item) -> ItemResult {
      auto rec = InstructionRecord::from_json(item);
      if (!rec.scorecard) throw Error(ErrorCode::ScoringIncomplete, "record " + rec.id + " has no quality scores");
      auto call = call_template(*gateway_, config_, "complexity", {rec.id},
                                TemplateKind::plain(TemplateId::complexity_assess), {{"question", rec.prompt}},
                                config_.complexity_temperature);
      rec.scorecard->complexity = parse_complexity(call.texts.front());
      rec.lineage.push_back(std::move(call.entry));
      return rec.to_json();
    });
    return body;
  });
}

StageManifest Pipeline::respond(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.response_temperature},
                    {"max_tokens", config_.max_tokens}};
  return run_stage(config_, "respond", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "respond", body);
    map_records(config_.jobs, "respond", items, body, [&](const Json& item) -> ItemResult {
      auto rec = InstructionRecord::from_json(item);
      const TemplateParams tp{{"prompt", rec.prompt}};
      auto call = call_llm(*gateway_, config_, "respond", {rec.id}, rec.prompt, "raw", tp,
                           canonical_digest(raw_params_key(tp)), config_.response_temperature);
      auto& text = call.texts.front();
      if (text::trim(text).empty()) throw Error(ErrorCode::MalformedResponse, "empty response");
      if (rec.language == to_string(Language::other)) {
        for (const auto& block : extract_blocks(text)) {
          if (block.language != Language::other) {
            rec.language = std::string(to_string(block.language));
            break;
          }
        }
      }
      rec.response = std::move(text);
      rec.lineage.push_back(std::move(call.entry));
      return rec.to_json();
    });
    return body;
  });
}

StageManifest Pipeline::gate(const StagePaths& paths) {
  const auto& sg = impl_->static_gate(config_);
  const Json params{{"rules", sg.rules().digest()}, {"analyzers", sg.registry().digest()}};
  return run_stage(config_, "gate", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "gate", body);
    std::vector<std::optional<InstructionRecord>> records;
    std::vector<std::string> responses;
    std::vector<std::size_t> slot;  // item index -> index into responses
    for (const auto& item : items) {
      try {
        auto rec = InstructionRecord::from_json(item);
        if (!rec.response) throw Error(ErrorCode::InvalidArgument, "record " + rec.id + " has no response");
        slot.push_back(responses.size());
        responses.push_back(*rec.response);
        records.push_back(std::move(rec));
      } catch (const Error& e) {
        slot.push_back(SIZE_MAX);
        records.push_back(std::nullopt);
        body.rejects.push_back(Reject::from_error("gate", e, item));
      }
    }
    const auto verdicts = sg.gate_responses(responses);
    auto& by_language = body.breakdown["gate_failures_by_language"];
    auto& summary = body.breakdown["gate"];
    summary["pass"] = 0;
    summary["fail"] = 0;
    summary["no_code"] = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!records[i]) continue;
      auto& rec = *records[i];
      const auto& outcome = verdicts[slot[i]];
      if (!outcome) {
        ++summary["fail"];
        ++by_language[rec.language];
        body.rejects.push_back(Reject::from_error("gate", outcome.error(), rec.to_json()));
        continue;
      }
      const auto& v = *outcome;
      rec.gate = v.to_json();
      if (v.no_code) ++summary["no_code"];
      if (v.pass) {
        ++summary["pass"];
        body.outputs.push_back(rec.to_json());
        continue;
      }
      ++summary["fail"];
      std::set<std::string> failing;
      std::string first_issue;
      for (const auto& b : v.blocks) {
        if (b.report.status != ReportStatus::fail) continue;
        failing.insert(std::string(to_string(b.block.language)));
        for (const auto& issue : b.report.issues) {
          if (first_issue.empty() && issue.severity == Severity::error) {
            first_issue = issue.rule_name + ": " + issue.message;
          }
        }
      }
      for (const auto& lang : failing) ++by_language[lang];
      body.rejects.push_back(Reject::with_reason("gate", "LintError", first_issue, rec.to_json()));
    }
    return body;
  });
}

StageManifest Pipeline::merge(const std::vector<fs::path>& inputs, const StagePaths& paths) {
  return run_stage(config_, "merge", paths, inputs, Json::object(), "record", [&] {
    StageBody body;
    for (const auto& in : inputs) {
      for (auto& v : parse_lines(in, "merge", body)) body.outputs.push_back(std::move(v));
    }
    return body;
  });
}

StageManifest Pipeline::export_dataset(const StagePaths& paths) {
  return run_stage(config_, "export", paths, {paths.input}, Json::object(), "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "export", body);
    map_records(1, "export", items, body, [&](const Json& item) -> ItemResult {
      const auto rec = InstructionRecord::from_json(item);
      if (!rec.response) throw Error(ErrorCode::InvalidArgument, "record " + rec.id + " has no response");
      Json meta{{"id", rec.id},
                {"flow", to_string(rec.flow)},
                {"problem_type", slug(rec.problem_type)},
                {"language", rec.language}};
      meta["quality_score"] = rec.scorecard ? Json(rec.scorecard->final_score) : Json(nullptr);
      meta["complexity"] = rec.scorecard && rec.scorecard->complexity ? Json(*rec.scorecard->complexity) : Json(nullptr);
      return Json{{"prompt", rec.prompt}, {"response", *rec.response}, {"metadata", std::move(meta)}};
    });
    return body;
  });
}

// ---------------------------------------------------------------- backfeed

StageManifest Pipeline::extract_keywords(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.extraction_temperature},
                    {"max_tokens", config_.max_tokens}};
  return run_stage(config_, "keywords", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "keywords", body);
    map_records(config_.jobs, "keywords", items, body, [&](const Json& item) -> ItemResult {
      const auto rec = InstructionRecord::from_json(item);
      struct Dim {
        TemplateId id;
        KeywordDimension dim;
        const char* field;
      };
      static constexpr Dim dims[] = {
          {TemplateId::extract_task, KeywordDimension::Task, "task"},
          {TemplateId::extract_instruction, KeywordDimension::Instruction, "instruction"},
          {TemplateId::extract_knowledge, KeywordDimension::Knowledge, "knowledge"},
      };
      Json out{{"id", "kw:" + rec.id}, {"source", rec.id}, {"language", rec.language}};
      Json lineage = Json::array();
      for (const auto& d : dims) {
        auto call = call_template(*gateway_, config_, "keywords", {rec.id}, TemplateKind::plain(d.id),
                                  {{"problem", rec.prompt}}, config_.extraction_temperature);
        out[d.field] = parse_keyword_output(call.texts.front(), d.dim);
        lineage.push_back(call.entry.to_json());
      }
      out["lineage"] = std::move(lineage);
      return out;
    });
    return body;
  });
}

StageManifest Pipeline::merge_vocabulary(const StagePaths& paths) {
  std::vector<std::pair<NodeKind, fs::path>> files;
  if (!config_.vocab_task.empty()) files.emplace_back(NodeKind::Task, config_.vocab_task);
  if (!config_.vocab_instruction.empty()) files.emplace_back(NodeKind::Instruction, config_.vocab_instruction);
  if (!config_.vocab_knowledge.empty()) files.emplace_back(NodeKind::KnowledgePoint, config_.vocab_knowledge);
  std::vector<fs::path> inputs{paths.input};
  for (const auto& [_, f] : files) inputs.push_back(f);
  return run_stage(config_, "vocabulary", paths, inputs, Json::object(), "keyword", [&] {
    StageBody body;
    Vocabulary vocab;
    const auto offer = [&](std::string_view keyword, NodeKind kind, const std::string& origin) {
      ++body.in;
      const auto k = std::string(text::trim(keyword));
      const Json entry{{"keyword", k}, {"kind", vocab_name(kind)}, {"origin", origin}};
      if (vocab.add(k, kind)) {
        body.outputs.push_back(Json{{"keyword", k}, {"kind", vocab_name(kind)}});
      } else {
        body.rejects.push_back(Reject::with_reason("vocabulary", k.empty() ? "EmptyInput" : "Duplicate", k, entry));
      }
    };
    for (const auto& [kind, file] : files) {
      for (const auto& line : text::split_lines(text::read_file(file))) {
        if (!text::trim(line).empty()) offer(line, kind, file.filename().string());
      }
    }
    StageBody parsed;
    const auto items = parse_lines(paths.input, "vocabulary", parsed);
    body.in += parsed.in - items.size();
    for (auto& r : parsed.rejects) body.rejects.push_back(std::move(r));
    for (const auto& item : items) {
      const auto source = item.value("id", std::string());
      for (const char* field : {"task", "instruction", "knowledge"}) {
        if (!item.contains(field) || !item[field].is_array()) continue;
        for (const auto& k : item[field]) {
          if (k.is_string()) offer(k.get<std::string>(), vocab_kind(field), source);
        }
      }
    }
    return body;
  });
}

StageManifest Pipeline::combine_keywords(const StagePaths& paths) {
  const Json params{{"count", config_.combinations},
                    {"min_keywords", config_.min_keywords},
                    {"max_keywords", config_.max_keywords}};
  return run_stage(config_, "combine", paths, {paths.input}, params, "combination", [&] {
    StageBody body;
    StageBody parsed;
    const auto items = parse_lines(paths.input, "combine", parsed);
    std::vector<std::string> tasks;
    std::vector<std::pair<std::string, NodeKind>> pool;
    for (const auto& item : items) {
      const auto kind = vocab_kind(item.at("kind").get<std::string>());
      auto k = item.at("keyword").get<std::string>();
      if (kind == NodeKind::Task) {
        tasks.push_back(std::move(k));
      } else {
        pool.emplace_back(std::move(k), kind);
      }
    }
    for (std::size_t i = 0; i < config_.combinations; ++i) {
      ++body.in;
      char id[32];
      std::snprintf(id, sizeof id, "combo-%04zu", i);
      if (tasks.empty() || pool.empty()) {
        body.rejects.push_back(Reject::with_reason("combine", "EmptyInput", "vocabulary lacks tasks or other keywords",
                                                   Json{{"id", id}}));
        continue;
      }
      SeededRng rng(derive_seed(config_.seed, std::string("combine/") + id));
      Json keywords = Json::array();
      keywords.push_back(Json{{"keyword", tasks[rng.uniform(0, tasks.size() - 1)]}, {"kind", "task"}});
      const auto k = rng.uniform(config_.min_keywords, config_.max_keywords);
      auto draw = pool;
      const auto take = std::min<std::size_t>(k - 1, draw.size());
      for (std::size_t j = 0; j < take; ++j) {
        std::swap(draw[j], draw[rng.uniform(j, draw.size() - 1)]);
        keywords.push_back(Json{{"keyword", draw[j].first}, {"kind", vocab_name(draw[j].second)}});
      }
      body.outputs.push_back(Json{{"id", id}, {"keywords", std::move(keywords)}});
    }
    return body;
  });
}

StageManifest Pipeline::build_knowledge_graph(const StagePaths& paths) {
  const Json params{{"model", config_.model}, {"temperature", config_.extraction_temperature},
                    {"max_tokens", config_.max_tokens}};
  return run_stage(config_, "kg", paths, {paths.input}, params, "combination", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "kg", body);
    map_records(config_.jobs, "kg", items, body, [&](const Json& item) -> ItemResult {
      const auto id = item.at("id").get<std::string>();
      std::vector<std::string> words;
      for (const auto& k : item.at("keywords")) words.push_back(k.at("keyword").get<std::string>());
      const double temp = config_.extraction_temperature;
      Json lineage = Json::array();

      auto nodes_call = call_template(*gateway_, config_, "kg_nodes", {id}, TemplateKind::plain(TemplateId::kg_nodes),
                                      {{"keywords", keyword_list(words)}}, temp);
      lineage.push_back(nodes_call.entry.to_json());
      const auto parsed_nodes = parse_nodes(nodes_call.texts.front());
      NodeSet nodes;
      for (const auto& n : parsed_nodes.nodes) nodes.add(n);
      if (nodes.size() == 0) throw Error(ErrorCode::ParseFailure, "node classification produced no nodes");

      std::string node_lines;
      for (const auto& n : nodes.nodes()) {
        node_lines += "Node(id=\"" + n.id + "\", type='" + std::string(to_string(n.kind)) + "')\n";
      }
      node_lines.pop_back();
      auto rel_call = call_template(*gateway_, config_, "kg_relations", {id},
                                    TemplateKind::plain(TemplateId::kg_relations), {{"nodes", node_lines}}, temp);
      lineage.push_back(rel_call.entry.to_json());
      const auto triples = parse_relation_answer(rel_call.texts.front(), nodes);
      if (triples.triples.empty()) {
        throw Error(ErrorCode::ParseFailure, triples.failures.empty() ? std::string("no relation lines")
                                                                      : triples.failures.front().error.what());
      }

      std::string triple_lines;
      for (const auto& t : triples.triples) {
        triple_lines += t.subject.id + " " + relation_phrase(t.relation) + " " + t.object.id + "\n";
      }
      triple_lines.pop_back();
      auto phrase_call = call_template(*gateway_, config_, "kg_phrases", {id},
                                       TemplateKind::plain(TemplateId::kg_phrases), {{"triples", triple_lines}}, temp);
      lineage.push_back(phrase_call.entry.to_json());

      Json out{{"id", id}, {"keywords", item.at("keywords")}};
      out["nodes"] = Json::array();
      for (const auto& n : nodes.nodes()) out["nodes"].push_back(Json{{"id", n.id}, {"kind", to_string(n.kind)}});
      out["triples"] = Json::array();
      for (const auto& t : triples.triples) out["triples"].push_back(t.id());
      out["lineage"] = lineage;

      const auto groups = text::ifind(phrase_call.texts.front(), "no relevance") == std::string_view::npos
                              ? build_groups(triples.triples)
                              : std::vector<KeywordGroup>{};
      if (groups.empty()) return Reject::with_reason("kg", "NoRelevance", "no related keyword group", out);
      out["groups"] = Json::array();
      for (const auto& g : groups) out["groups"].push_back(g.to_json());
      return out;
    });
    return body;
  });
}

StageManifest Pipeline::dedup(const StagePaths& paths) {
  const Json params{{"threshold", config_.dedup_threshold}, {"embedder", "char3-fnv1a-1024"}};
  return run_stage(config_, "dedup", paths, {paths.input}, params, "group", [&] {
    StageBody body;
    StageBody parsed;
    const auto items = parse_lines(paths.input, "dedup", parsed);
    body.in = parsed.in - items.size();
    body.rejects = std::move(parsed.rejects);
    std::vector<KeywordGroup> groups;
    std::vector<Json> records;
    for (const auto& item : items) {
      const auto id = item.at("id").get<std::string>();
      std::size_t j = 0;
      for (const auto& gj : item.at("groups")) {
        auto g = KeywordGroup::from_json(gj);
        g.embedding = embed(g.members);
        records.push_back(Json{{"id", id + "/g" + std::to_string(j++)},
                               {"members", g.members},
                               {"triples", g.lineage},
                               {"lineage", item.at("lineage")}});
        groups.push_back(std::move(g));
      }
    }
    body.in += groups.size();
    const auto kept = dedup_groups(groups, config_.dedup_threshold);
    // kept is an order-preserving subsequence of groups.
    std::size_t k = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (k < kept.size() && kept[k].members == groups[i].members && kept[k].lineage == groups[i].lineage) {
        body.outputs.push_back(std::move(records[i]));
        ++k;
      } else {
        body.rejects.push_back(Reject::with_reason("dedup", "Duplicate", text::join(groups[i].members, ", "),
                                                   std::move(records[i])));
      }
    }
    return body;
  });
}

StageManifest Pipeline::generate_backfeed(const StagePaths& paths) {
  Json weights = Json::object();
  for (const auto& [t, w] : config_.problem_type_weights) weights[std::string(slug(t))] = w;
  const Json params{{"model", config_.model}, {"temperature", config_.generation_temperature},
                    {"max_tokens", config_.max_tokens}, {"weights", weights}};
  return run_stage(config_, "backfeed", paths, {paths.input}, params, "record", [&] {
    StageBody body;
    const auto items = parse_lines(paths.input, "backfeed", body);
    map_records(config_.jobs, "backfeed", items, body, [&](const Json& item) -> ItemResult {
      const auto id = item.at("id").get<std::string>();
      const auto members = item.at("members").get<std::vector<std::string>>();
      SeededRng rng(derive_seed(config_.seed, "backfeed/" + id));
      const auto type = draw_problem_type(config_.problem_type_weights, rng);
      auto call = call_template(*gateway_, config_, "backfeed", {id}, TemplateKind::backfeed_question(type),
                                {{"keywords", text::join(members, ", ")}}, config_.generation_temperature);
      InstructionRecord rec;
      rec.id = "bf:" + id;
      rec.flow = Flow::backfeed;
      rec.problem_type = type;
      rec.language = detect_language(members);
      rec.prompt = parse_backfeed_output(call.texts.front());
      for (const auto& e : item.at("lineage")) rec.lineage.push_back(LineageEntry::from_json(e));
      rec.lineage.push_back(std::move(call.entry));
      return rec.to_json();
    });
    return body;
  });
}

// ---------------------------------------------------------------- flows

std::vector<StageManifest> Pipeline::run_reverse_flow(const fs::path& snippets, const fs::path& dir) {
  std::vector<StageManifest> out;
  out.push_back(generate_reverse(stage_paths(snippets, dir / "reverse_01_generate.jsonl")));
  out.push_back(complicate(stage_paths(dir / "reverse_01_generate.jsonl", dir / "reverse_02_complicate.jsonl")));
  out.push_back(rewrite(stage_paths(dir / "reverse_02_complicate.jsonl", dir / "reverse_03_rewrite.jsonl")));
  out.push_back(score(stage_paths(dir / "reverse_03_rewrite.jsonl", dir / "reverse_04_quality.jsonl")));
  out.push_back(assess_complexity(stage_paths(dir / "reverse_04_quality.jsonl", dir / "reverse_05_complexity.jsonl")));
  return out;
}

std::vector<StageManifest> Pipeline::run_backfeed_flow(const fs::path& reverse_records, const fs::path& dir) {
  std::vector<StageManifest> out;
  out.push_back(extract_keywords(stage_paths(reverse_records, dir / "backfeed_01_keywords.jsonl")));
  out.push_back(merge_vocabulary(stage_paths(dir / "backfeed_01_keywords.jsonl", dir / "backfeed_02_vocabulary.jsonl")));
  out.push_back(combine_keywords(stage_paths(dir / "backfeed_02_vocabulary.jsonl", dir / "backfeed_03_combinations.jsonl")));
  out.push_back(build_knowledge_graph(stage_paths(dir / "backfeed_03_combinations.jsonl", dir / "backfeed_04_kg.jsonl")));
  out.push_back(dedup(stage_paths(dir / "backfeed_04_kg.jsonl", dir / "backfeed_05_groups.jsonl")));
  out.push_back(generate_backfeed(stage_paths(dir / "backfeed_05_groups.jsonl", dir / "backfeed_06_generate.jsonl")));
  out.push_back(score(stage_paths(dir / "backfeed_06_generate.jsonl", dir / "backfeed_07_quality.jsonl")));
  out.push_back(assess_complexity(stage_paths(dir / "backfeed_07_quality.jsonl", dir / "backfeed_08_complexity.jsonl")));
  return out;
}

RunResult Pipeline::run_all(const fs::path& dir) {
  fs::create_directories(dir);
  RunResult result;
  auto& ms = result.manifests;

  fs::path snippets = config_.snippets;
  if (snippets.empty()) {
    if (config_.corpus.empty()) throw Error(ErrorCode::ConfigError, "run-all needs inputs.corpus or inputs.snippets");
    snippets = dir / "snippets.jsonl";
    ms.push_back(extract_snippets(stage_paths(config_.corpus, snippets)));
  }
  for (auto& m : run_reverse_flow(snippets, dir)) ms.push_back(std::move(m));
  for (auto& m : run_backfeed_flow(dir / "reverse_05_complexity.jsonl", dir)) ms.push_back(std::move(m));
  ms.push_back(merge({dir / "reverse_05_complexity.jsonl", dir / "backfeed_08_complexity.jsonl"},
                     stage_paths("", dir / "prompts.jsonl")));
  ms.push_back(respond(stage_paths(dir / "prompts.jsonl", dir / "responses.jsonl")));
  ms.push_back(gate(stage_paths(dir / "responses.jsonl", dir / "gated.jsonl")));
  result.dataset = dir / "dataset.jsonl";
  ms.push_back(export_dataset(stage_paths(dir / "gated.jsonl", result.dataset)));

  std::vector<Json> manifest_lines;
  for (const auto& m : ms) manifest_lines.push_back(m.to_json());
  write_jsonl(dir / "manifests.jsonl", manifest_lines);

  const auto report = report_from_manifests(ms, dir);
  result.report = dir / "report.json";
  text::write_file_atomic(result.report, report.to_json().dump(2) + "\n");
  text::write_file_atomic(dir / "report.txt", report.to_text());
  return result;
}

}  // namespace instforge
