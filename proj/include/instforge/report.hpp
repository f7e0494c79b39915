#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "instforge/records.hpp"
#include "instforge/scoring.hpp"

namespace instforge {

struct RunReport {
  std::vector<StageManifest> stages;
  bool conserved = true;  // every stage satisfies in == out + rejected
  std::map<std::string, std::size_t> gate_failures_by_language;
  std::size_t gate_no_code = 0;
  std::map<std::string, DistributionStats> complexity_by_flow;  // only flows with scores
  std::map<std::string, std::size_t> quality_histogram;        // final score -> records

  /// Stats sections are omitted when empty.
  Json to_json() const;
  std::string to_text() const;
};

/// `scored` supplies quality scores (histogram) and complexity scores (per
/// flow statistics); records without them are ignored.
RunReport build_report(const std::vector<StageManifest>& manifests, const std::vector<InstructionRecord>& scored);

/// Reads scored records back from the quality stages (outputs and low-score
/// rejects) and complexity outputs named in `manifests`; relative paths
/// resolve against `run_dir`.
RunReport report_from_manifests(const std::vector<StageManifest>& manifests, const std::filesystem::path& run_dir);

/// manifests.jsonl in `run_dir`.
RunReport load_report(const std::filesystem::path& run_dir);

}  // namespace instforge
