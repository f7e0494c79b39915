#include "instforge/gate.hpp"

namespace instforge {

Json GateVerdict::to_json() const {
  Json j;
  j["verdict"] = pass ? "pass" : "fail";
  j["no_code"] = no_code;
  j["blocks"] = Json::array();
  for (const auto& b : blocks) {
    Json bj;
    bj["language"] = to_string(b.block.language);
    bj["info_string"] = b.block.info_string;
    bj["start_line"] = b.block.start_line;
    bj["skipped"] = b.skipped;
    bj["tools"] = Json::array();
    for (const auto& t : b.tools) bj["tools"].push_back(Json{{"tool", t.tool}, {"version", t.version}});
    bj["report"] = b.report.to_json();
    j["blocks"].push_back(std::move(bj));
  }
  j["warnings"] = warnings;
  return j;
}

StaticGate::StaticGate(RuleConfig rules, AnalyzerRegistry registry, AnalyzeOptions options)
    : rules_(std::move(rules)), registry_(std::move(registry)), options_(std::move(options)) {}

GateVerdict StaticGate::gate_response(std::string_view response) const {
  auto results = gate_responses({std::string(response)});
  return results.front().value();
}

std::vector<Outcome<GateVerdict>> StaticGate::gate_responses(const std::vector<std::string>& responses) const {
  std::vector<GateVerdict> verdicts(responses.size());
  std::vector<CodeBlock> all;
  std::vector<std::size_t> owner;
  for (std::size_t r = 0; r < responses.size(); ++r) {
    auto blocks = extract_blocks(responses[r], &verdicts[r].warnings);
    verdicts[r].no_code = blocks.empty();
    for (auto& b : blocks) {
      all.push_back(std::move(b));
      owner.push_back(r);
    }
  }

  auto analyses = analyze_blocks(all, rules_, registry_, options_);
  std::vector<std::optional<Error>> errors(responses.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto& v = verdicts[owner[i]];
    if (!analyses[i].ok()) {
      if (!errors[owner[i]]) errors[owner[i]] = analyses[i].error();
      continue;
    }
    const auto& a = *analyses[i];
    if (a.report.status == ReportStatus::fail) v.pass = false;
    v.blocks.push_back({std::move(all[i]), a.report, a.tools, a.skipped});
  }

  std::vector<Outcome<GateVerdict>> out;
  out.reserve(responses.size());
  for (std::size_t r = 0; r < responses.size(); ++r) {
    if (errors[r]) out.emplace_back(*errors[r]);
    else out.emplace_back(std::move(verdicts[r]));
  }
  return out;
}

}  // namespace instforge
