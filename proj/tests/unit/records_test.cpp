#include <gtest/gtest.h>

#include "instforge/records.hpp"

using namespace instforge;

namespace {

LineageEntry entry(std::string stage) {
  LineageEntry e;
  e.stage = std::move(stage);
  e.kind = "complicate";
  e.params = {{"method", "Depth Extension"}, {"prompt", "p"}};
  e.params_digest = "d";
  e.model = "m";
  e.temperature = 0.7;
  e.max_tokens = 100;
  e.request_digests = {"r0"};
  return e;
}

InstructionRecord reverse_record() {
  InstructionRecord r;
  r.id = "rev:x#L1-5";
  r.flow = Flow::reverse;
  r.problem_type = ProblemType::Debug;
  r.language = "python";
  r.prompt = "Fix it";
  r.lineage = {entry("generate"), entry("complicate"), entry("rewrite")};
  return r;
}

}  // namespace

TEST(Records, JsonRoundTrip) {
  auto r = reverse_record();
  r.response = "```python\nprint(1)\n```";
  std::array<CriteriaAssessment, 3> as;
  as[0].met = {1, 2};
  r.scorecard = ScoreCard::from_assessments(as);
  r.scorecard->complexity = 4;
  r.gate = Json{{"verdict", "pass"}};
  const auto back = InstructionRecord::from_json(r.to_json());
  EXPECT_EQ(back.to_json(), r.to_json());
  EXPECT_EQ(back.lineage[1].params.at("method"), "Depth Extension");
}

TEST(Records, MalformedJsonIsParseFailure) {
  auto j = reverse_record().to_json();
  j["problem_type"] = "poetry";
  EXPECT_THROW(InstructionRecord::from_json(j), Error);
  j = reverse_record().to_json();
  j.erase("prompt");
  try {
    InstructionRecord::from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
  }
}

TEST(Records, LineageOrderFollowsFlow) {
  auto r = reverse_record();
  EXPECT_TRUE(r.lineage_valid());
  r.lineage.push_back(entry("quality"));
  r.response = "x";
  EXPECT_TRUE(r.lineage_valid());
  std::swap(r.lineage[0], r.lineage[2]);
  EXPECT_FALSE(r.lineage_valid());
  r = reverse_record();
  r.lineage.erase(r.lineage.begin() + 1);
  EXPECT_TRUE(r.lineage_valid());
  r.response = "x";
  EXPECT_FALSE(r.lineage_valid());
  r = reverse_record();
  r.lineage.push_back(entry("kg_nodes"));
  EXPECT_FALSE(r.lineage_valid());
}

TEST(Records, BackfeedStages) {
  InstructionRecord r;
  r.flow = Flow::backfeed;
  r.lineage = {entry("kg_nodes"), entry("kg_relations"), entry("kg_phrases"), entry("backfeed")};
  r.response = "x";
  EXPECT_TRUE(r.lineage_valid());
  EXPECT_EQ(flow_stages(Flow::backfeed).front(), "kg_nodes");
}

TEST(Records, RejectReasonsAreCodeAtStage) {
  const auto r = Reject::from_error("gate", Error(ErrorCode::AnalyzerMissing, "checkstyle"), Json{{"id", "a"}});
  EXPECT_EQ(r.reason, "AnalyzerMissing@gate");
  EXPECT_EQ(r.to_json()["record"]["id"], "a");
  EXPECT_EQ(Reject::with_reason("quality", "LowScore", "4.33", Json()).reason, "LowScore@quality");
  EXPECT_EQ(reject_reason("Duplicate", "dedup"), "Duplicate@dedup");
}

TEST(Manifest, ConservationAndRoundTrip) {
  StageManifest m;
  m.stage = "quality";
  m.counts = {10, 7, 3};
  m.breakdown["reject_reasons"]["LowScore@quality"] = 3;
  EXPECT_TRUE(m.conserved());
  const auto back = StageManifest::from_json(m.to_json());
  EXPECT_EQ(back.to_json(), m.to_json());
  m.counts.rejected = 2;
  EXPECT_FALSE(m.conserved());
}

TEST(Flow, NamesParse) {
  EXPECT_EQ(parse_flow("reverse"), Flow::reverse);
  EXPECT_EQ(parse_flow("backfeed"), Flow::backfeed);
  EXPECT_THROW(parse_flow("sideways"), Error);
}
