#include "instforge/report.hpp"

#include <cstdio>
#include <sstream>

#include "instforge/text.hpp"

namespace instforge {

namespace fs = std::filesystem;

namespace {

RunReport assemble(const std::vector<StageManifest>& manifests, const std::vector<double>& finals,
                   const std::map<std::string, std::vector<int>>& complexity) {
  RunReport r;
  r.stages = manifests;
  for (const auto& m : manifests) {
    r.conserved = r.conserved && m.conserved();
    if (auto it = m.breakdown.find("gate_failures_by_language"); it != m.breakdown.end()) {
      for (const auto& [lang, n] : it->second) r.gate_failures_by_language[lang] += n;
    }
    if (auto it = m.breakdown.find("gate"); it != m.breakdown.end()) {
      if (auto nc = it->second.find("no_code"); nc != it->second.end()) r.gate_no_code += nc->second;
    }
  }
  r.quality_histogram = histogram(finals);
  for (const auto& [flow, values] : complexity) {
    if (!values.empty()) r.complexity_by_flow[flow] = distribution_stats(values);
  }
  return r;
}

}  // namespace

RunReport build_report(const std::vector<StageManifest>& manifests, const std::vector<InstructionRecord>& scored) {
  std::vector<double> finals;
  std::map<std::string, std::vector<int>> complexity;
  for (const auto& rec : scored) {
    if (!rec.scorecard) continue;
    finals.push_back(rec.scorecard->final_score);
    if (rec.scorecard->complexity) complexity[std::string(to_string(rec.flow))].push_back(*rec.scorecard->complexity);
  }
  return assemble(manifests, finals, complexity);
}

namespace {

fs::path locate(const std::string& shown, const fs::path& run_dir) {
  fs::path p = shown;
  return p.is_absolute() ? p : run_dir / p;
}

void read_records(const fs::path& path, std::vector<InstructionRecord>& out, bool from_rejects) {
  if (!fs::exists(path)) return;
  for (const auto& line : read_jsonl(path)) {
    if (!line.value) continue;
    try {
      if (from_rejects) {
        if (line.value->value("reason", "") != reject_reason("LowScore", "quality")) continue;
        out.push_back(InstructionRecord::from_json(line.value->at("record")));
      } else {
        out.push_back(InstructionRecord::from_json(*line.value));
      }
    } catch (const std::exception&) {
      // Not a scored record.
    }
  }
}

}  // namespace

RunReport report_from_manifests(const std::vector<StageManifest>& manifests, const fs::path& run_dir) {
  std::vector<InstructionRecord> quality;
  std::vector<InstructionRecord> complexity;
  for (const auto& m : manifests) {
    if (m.stage == "quality") {
      read_records(locate(m.output_path, run_dir), quality, false);
      read_records(locate(m.rejects_path, run_dir), quality, true);
    } else if (m.stage == "complexity") {
      read_records(locate(m.output_path, run_dir), complexity, false);
    }
  }
  std::vector<double> finals;
  for (const auto& rec : quality) {
    if (rec.scorecard) finals.push_back(rec.scorecard->final_score);
  }
  std::map<std::string, std::vector<int>> by_flow;
  for (const auto& rec : complexity) {
    if (rec.scorecard && rec.scorecard->complexity) {
      by_flow[std::string(to_string(rec.flow))].push_back(*rec.scorecard->complexity);
    }
  }
  return assemble(manifests, finals, by_flow);
}

RunReport load_report(const fs::path& run_dir) {
  const auto path = run_dir / "manifests.jsonl";
  if (!fs::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  std::vector<StageManifest> manifests;
  for (const auto& line : read_jsonl(path)) {
    if (!line.value) throw Error(ErrorCode::ParseFailure, path.string() + ":" + std::to_string(line.line_no));
    manifests.push_back(StageManifest::from_json(*line.value));
  }
  return report_from_manifests(manifests, run_dir);
}

Json RunReport::to_json() const {
  Json j;
  j["conserved"] = conserved;
  j["stages"] = Json::array();
  for (const auto& m : stages) {
    j["stages"].push_back(Json{{"stage", m.stage},
                               {"output", m.output_path},
                               {"unit", m.unit},
                               {"in", m.counts.in},
                               {"out", m.counts.out},
                               {"rejected", m.counts.rejected},
                               {"conserved", m.conserved()}});
  }
  j["gate"] = Json{{"no_code", gate_no_code}, {"failures_by_language", gate_failures_by_language}};
  if (!complexity_by_flow.empty()) {
    j["complexity"] = Json::object();
    for (const auto& [flow, s] : complexity_by_flow) j["complexity"][flow] = s.to_json();
  }
  if (!quality_histogram.empty()) j["quality_histogram"] = quality_histogram;
  return j;
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-32s %8s %8s %8s  %s\n", "stage", "output", "in", "out", "rejected", "unit");
  out << buf;
  for (const auto& m : stages) {
    std::snprintf(buf, sizeof buf, "%-12s %-32s %8zu %8zu %8zu  %s%s\n", m.stage.c_str(), m.output_path.c_str(),
                  m.counts.in, m.counts.out, m.counts.rejected, m.unit.c_str(), m.conserved() ? "" : "  NOT CONSERVED");
    out << buf;
  }
  out << "conservation: " << (conserved ? "ok" : "VIOLATED") << "\n";
  out << "gate: no_code=" << gate_no_code;
  for (const auto& [lang, n] : gate_failures_by_language) out << " " << lang << "_failures=" << n;
  out << "\n";
  for (const auto& [flow, s] : complexity_by_flow) {
    std::snprintf(buf, sizeof buf, "complexity[%s]: n=%zu mean=%.2f median=%.2f std=%.2f\n", flow.c_str(), s.count,
                  s.mean, s.median, s.std);
    out << buf;
  }
  if (!quality_histogram.empty()) {
    out << "quality histogram:\n";
    for (const auto& [score, n] : quality_histogram) out << "  " << score << ": " << n << "\n";
  }
  return out.str();
}

}  // namespace instforge
