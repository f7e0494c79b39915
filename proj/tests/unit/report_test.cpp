#include <gtest/gtest.h>

#include "instforge/report.hpp"

using namespace instforge;

namespace {

StageManifest manifest(std::string stage, std::size_t in, std::size_t out, std::size_t rejected) {
  StageManifest m;
  m.stage = std::move(stage);
  m.output_path = m.stage + ".jsonl";
  m.counts = {in, out, rejected};
  return m;
}

InstructionRecord scored(Flow flow, std::array<int, 3> met, std::optional<int> complexity) {
  InstructionRecord r;
  r.flow = flow;
  std::array<CriteriaAssessment, 3> as;
  for (std::size_t i = 0; i < 3; ++i) {
    for (int c = 1; c <= met[i]; ++c) as[i].met.insert(c);
  }
  r.scorecard = ScoreCard::from_assessments(as);
  r.scorecard->complexity = complexity;
  return r;
}

}  // namespace

TEST(Report, EmptyRunHasNoStatsSections) {
  const auto r = build_report({}, {});
  EXPECT_TRUE(r.conserved);
  const auto j = r.to_json();
  EXPECT_TRUE(j["stages"].empty());
  EXPECT_EQ(j["gate"]["no_code"], 0);
  EXPECT_FALSE(j.contains("complexity"));
  EXPECT_FALSE(j.contains("quality_histogram"));
  EXPECT_NE(r.to_text().find("conservation: ok"), std::string::npos);
}

TEST(Report, HistogramStatsAndGateTallies) {
  auto gate = manifest("gate", 5, 3, 2);
  gate.breakdown["gate"]["no_code"] = 1;
  gate.breakdown["gate_failures_by_language"]["java"] = 2;
  InstructionRecord unscored;
  const auto r = build_report(
      {manifest("quality", 4, 3, 1), gate},
      {scored(Flow::reverse, {6, 6, 6}, 3), scored(Flow::reverse, {6, 7, 7}, 5), scored(Flow::backfeed, {4, 4, 4}, 1),
       unscored});
  EXPECT_TRUE(r.conserved);
  EXPECT_EQ(r.gate_no_code, 1u);
  EXPECT_EQ(r.gate_failures_by_language.at("java"), 2u);
  EXPECT_EQ(r.quality_histogram.at("6.00"), 1u);
  EXPECT_EQ(r.quality_histogram.at("6.67"), 1u);
  EXPECT_EQ(r.quality_histogram.at("4.00"), 1u);
  ASSERT_EQ(r.complexity_by_flow.size(), 2u);
  EXPECT_DOUBLE_EQ(r.complexity_by_flow.at("reverse").mean, 4.0);
  EXPECT_EQ(r.complexity_by_flow.at("backfeed").count, 1u);
  const auto text = r.to_text();
  EXPECT_NE(text.find("java_failures=2"), std::string::npos);
  EXPECT_NE(text.find("complexity[reverse]"), std::string::npos);
}

TEST(Report, ConservationViolationIsFlagged) {
  const auto r = build_report({manifest("dedup", 5, 3, 1)}, {});
  EXPECT_FALSE(r.conserved);
  EXPECT_FALSE(r.to_json()["conserved"].get<bool>());
  EXPECT_NE(r.to_text().find("NOT CONSERVED"), std::string::npos);
}
