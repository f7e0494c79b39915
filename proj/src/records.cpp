#include "instforge/records.hpp"

#include <algorithm>

#include "instforge/text.hpp"

namespace instforge {

std::string_view to_string(Flow flow) noexcept { return flow == Flow::reverse ? "reverse" : "backfeed"; }

Flow parse_flow(std::string_view name) {
  if (name == "reverse") return Flow::reverse;
  if (name == "backfeed") return Flow::backfeed;
  throw Error(ErrorCode::ParseFailure, "unknown flow '" + std::string(name) + "'");
}

Json LineageEntry::to_json() const {
  Json j;
  j["stage"] = stage;
  j["inputs"] = inputs;
  j["kind"] = kind;
  j["params"] = Json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["params_digest"] = params_digest;
  j["model"] = model;
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["request_digests"] = request_digests;
  return j;
}

LineageEntry LineageEntry::from_json(const Json& j) {
  LineageEntry e;
  e.stage = j.at("stage").get<std::string>();
  e.inputs = j.value("inputs", std::vector<std::string>{});
  e.kind = j.at("kind").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) e.params[k] = v.get<std::string>();
  e.params_digest = j.value("params_digest", "");
  e.model = j.value("model", "");
  e.temperature = j.value("temperature", 0.0);
  e.max_tokens = j.value("max_tokens", 0);
  e.request_digests = j.value("request_digests", std::vector<std::string>{});
  return e;
}

const std::vector<std::string>& flow_stages(Flow flow) {
  static const std::vector<std::string> reverse = {"generate", "complicate", "rewrite", "quality",
                                                   "complexity", "respond", "gate"};
  static const std::vector<std::string> backfeed = {"kg_nodes", "kg_relations", "kg_phrases", "backfeed",
                                                    "quality", "complexity", "respond", "gate"};
  return flow == Flow::reverse ? reverse : backfeed;
}

Json InstructionRecord::to_json() const {
  Json j;
  j["id"] = id;
  j["flow"] = to_string(flow);
  j["problem_type"] = slug(problem_type);
  j["language"] = language;
  j["prompt"] = prompt;
  if (response) j["response"] = *response;
  j["lineage"] = Json::array();
  for (const auto& e : lineage) j["lineage"].push_back(e.to_json());
  if (scorecard) j["scorecard"] = scorecard->to_json();
  if (gate) j["gate"] = *gate;
  return j;
}

InstructionRecord InstructionRecord::from_json(const Json& j) {
  try {
    InstructionRecord r;
    r.id = j.at("id").get<std::string>();
    r.flow = parse_flow(j.at("flow").get<std::string>());
    r.problem_type = parse_problem_type(j.at("problem_type").get<std::string>());
    r.language = j.value("language", "other");
    r.prompt = j.at("prompt").get<std::string>();
    if (j.contains("response") && j["response"].is_string()) r.response = j["response"].get<std::string>();
    if (j.contains("lineage")) {
      for (const auto& e : j["lineage"]) r.lineage.push_back(LineageEntry::from_json(e));
    }
    if (j.contains("scorecard") && !j["scorecard"].is_null()) r.scorecard = ScoreCard::from_json(j["scorecard"]);
    if (j.contains("gate") && !j["gate"].is_null()) r.gate = j["gate"];
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("instruction record: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseFailure, "instruction record: " + e.detail());
  }
}

bool InstructionRecord::lineage_valid() const {
  const auto& order = flow_stages(flow);
  std::ptrdiff_t last = -1;
  for (const auto& e : lineage) {
    auto it = std::find(order.begin(), order.end(), e.stage);
    if (it == order.end()) return false;
    const auto pos = it - order.begin();
    if (pos < last) return false;
    last = pos;
  }
  if (response) {
    const auto prompt_stages = flow == Flow::reverse ? std::vector<std::string>{"generate", "complicate", "rewrite"}
                                                     : std::vector<std::string>{"backfeed"};
    for (const auto& s : prompt_stages) {
      if (std::none_of(lineage.begin(), lineage.end(), [&](const LineageEntry& e) { return e.stage == s; })) {
        return false;
      }
    }
  }
  return true;
}

std::string reject_reason(std::string_view code, std::string_view stage) {
  return std::string(code) + "@" + std::string(stage);
}

Json Reject::to_json() const {
  Json j;
  j["stage"] = stage;
  j["reason"] = reason;
  j["excerpt"] = excerpt;
  j["record"] = record;
  return j;
}

Reject Reject::from_error(std::string_view stage, const Error& error, Json record) {
  return {std::string(stage), reject_reason(to_string(error.code()), stage), instforge::excerpt(error.detail(), 400),
          std::move(record)};
}

Reject Reject::with_reason(std::string_view stage, std::string_view reason, std::string_view detail, Json record) {
  return {std::string(stage), reject_reason(reason, stage), instforge::excerpt(detail, 400), std::move(record)};
}

Json StageManifest::to_json() const {
  Json j;
  j["stage"] = stage;
  j["input_path"] = input_path;
  j["output_path"] = output_path;
  j["rejects_path"] = rejects_path;
  j["seed"] = seed;
  j["unit"] = unit;
  j["counts"] = Json{{"in", counts.in}, {"out", counts.out}, {"rejected", counts.rejected}};
  j["params_digest"] = params_digest;
  j["output_digest"] = output_digest;
  j["breakdown"] = Json::object();
  for (const auto& [name, tally] : breakdown) {
    j["breakdown"][name] = Json::object();
    for (const auto& [k, v] : tally) j["breakdown"][name][k] = v;
  }
  return j;
}

StageManifest StageManifest::from_json(const Json& j) {
  try {
    StageManifest m;
    m.stage = j.at("stage").get<std::string>();
    m.input_path = j.value("input_path", "");
    m.output_path = j.value("output_path", "");
    m.rejects_path = j.value("rejects_path", "");
    m.seed = j.value("seed", std::uint64_t{0});
    m.unit = j.value("unit", "record");
    m.counts.in = j.at("counts").at("in").get<std::size_t>();
    m.counts.out = j.at("counts").at("out").get<std::size_t>();
    m.counts.rejected = j.at("counts").at("rejected").get<std::size_t>();
    m.params_digest = j.value("params_digest", "");
    m.output_digest = j.value("output_digest", "");
    if (j.contains("breakdown")) {
      for (const auto& [name, tally] : j["breakdown"].items()) {
        for (const auto& [k, v] : tally.items()) m.breakdown[name][k] = v.get<std::size_t>();
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("stage manifest: ") + e.what());
  }
}

}  // namespace instforge
