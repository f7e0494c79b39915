#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "instforge/gateway.hpp"
#include "instforge/jsonl.hpp"

namespace instforge {

inline constexpr int kCriteriaCount = 7;
inline constexpr double kDefaultKeepThreshold = 6.0;

struct CriteriaAssessment {
  std::set<int> met;  // each in 1..7
  std::string raw_text;
};

/// Bracketed list after the final "Standards Met" marker. Throws
/// ParseFailure, OutOfRange.
CriteriaAssessment parse_standards_met(std::string_view text);

struct ScoreCard {
  std::array<CriteriaAssessment, 3> assessments;
  double final_score = 0.0;  // mean of the three met counts
  std::optional<int> complexity;

  static ScoreCard from_assessments(std::array<CriteriaAssessment, 3> assessments);
  /// {met_lists, final_score, complexity}
  Json to_json() const;
  static ScoreCard from_json(const Json& j);
};

struct ScoringSettings {
  std::string model;
  double temperature = 0.7;
  int max_tokens = 2048;
};

/// Three quality_filter completions (sample_index 0..2). Throws
/// ScoringIncomplete naming the first failure when any of them fails.
ScoreCard score_prompt(std::string_view prompt, const Gateway& gateway, Mode mode, const ScoringSettings& settings);

/// Requests score_prompt would issue, for batching.
std::vector<CompletionRequest> scoring_requests(std::string_view prompt, const ScoringSettings& settings);

template <typename T>
struct Partition {
  std::vector<T> kept;
  std::vector<T> dropped;
};

/// kept iff score(item) >= threshold; input order is preserved in both halves.
template <typename T, typename ScoreFn>
Partition<T> filter_by_score(const std::vector<T>& items, ScoreFn score, double threshold = kDefaultKeepThreshold) {
  Partition<T> out;
  for (const auto& item : items) (score(item) >= threshold ? out.kept : out.dropped).push_back(item);
  return out;
}

inline Partition<ScoreCard> filter_by_score(const std::vector<ScoreCard>& cards,
                                            double threshold = kDefaultKeepThreshold) {
  return filter_by_score(cards, [](const ScoreCard& c) { return c.final_score; }, threshold);
}

/// Score in 1..10 from the last JSON object after the final "Json Output"
/// heading (key "score"; "difficulty" and "complexity" accepted).
/// Throws ParseFailure, OutOfRange.
int parse_complexity(std::string_view text);

struct DistributionStats {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population
  std::size_t count = 0;

  Json to_json() const;
};

/// Throws EmptyInput.
DistributionStats distribution_stats(const std::vector<int>& scores);

/// Counts per value, keyed by the value printed with `decimals` digits.
std::map<std::string, std::size_t> histogram(const std::vector<double>& values, int decimals = 2);

}  // namespace instforge
