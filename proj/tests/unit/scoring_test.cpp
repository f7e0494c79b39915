#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "instforge/scoring.hpp"
#include "oracles.hpp"

using namespace instforge;
using namespace instforge::testing;

namespace {

std::string completion(const std::string& text) {
  return Json{{"choices", Json::array({Json{{"message", {{"content", text}}}}})}}.dump();
}

class QueueTransport : public Transport {
 public:
  explicit QueueTransport(std::deque<std::string> answers) : answers_(std::move(answers)) {}
  TransportResponse post(const std::string&) override {
    auto a = answers_.front();
    answers_.pop_front();
    return {200, completion(a), {}};
  }

 private:
  std::deque<std::string> answers_;
};

}  // namespace

TEST(StandardsMet, ExampleList) {
  const auto a = parse_standards_met("Evaluation Process: ...\nStandards Met: [1, 2, 4, 6, 7]");
  EXPECT_EQ(a.met, (std::set<int>{1, 2, 4, 6, 7}));
  EXPECT_EQ(a.met.size(), 5u);
}

TEST(StandardsMet, VariantsAndLastMarkerWins) {
  EXPECT_EQ(parse_standards_met("**standards met:** []").met.size(), 0u);
  EXPECT_EQ(parse_standards_met("Standards Met: [1]\nrevised\nStandards Met: [\"2\", 3, 3]").met,
            (std::set<int>{2, 3}));
}

TEST(StandardsMet, Errors) {
  auto code = [](const char* s) {
    try {
      parse_standards_met(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code("nothing"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Standards Met: none"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Standards Met: [1, 2"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Standards Met: [1, x]"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Standards Met: [0, 2]"), ErrorCode::OutOfRange);
  EXPECT_EQ(code("Standards Met: [8]"), ErrorCode::OutOfRange);
}

TEST(ScoreCard, MeanOfThreeCounts) {
  std::array<CriteriaAssessment, 3> as;
  as[0].met = {1, 2, 3, 4, 5, 6};
  as[1].met = {1, 2, 3, 4, 5, 6, 7};
  as[2].met = {1, 2, 3, 4, 5};
  const auto card = ScoreCard::from_assessments(as);
  EXPECT_DOUBLE_EQ(card.final_score, 6.0);
  const auto back = ScoreCard::from_json(card.to_json());
  EXPECT_DOUBLE_EQ(back.final_score, 6.0);
  EXPECT_EQ(back.assessments[1].met.size(), 7u);
  EXPECT_FALSE(back.complexity);
}

TEST(ScoreCard, FilterAgreesWithBruteForce) {
  std::mt19937_64 rng(99);
  std::vector<ScoreCard> cards;
  for (int i = 0; i < 2000; ++i) {
    cards.push_back(
        ScoreCard::from_assessments({random_assessment(rng), random_assessment(rng), random_assessment(rng)}));
  }
  const auto split = filter_by_score(cards);
  EXPECT_EQ(split.kept.size() + split.dropped.size(), cards.size());
  std::size_t k = 0, d = 0;
  for (const auto& c : cards) {
    const std::array<int, 3> counts = {static_cast<int>(c.assessments[0].met.size()),
                                       static_cast<int>(c.assessments[1].met.size()),
                                       static_cast<int>(c.assessments[2].met.size())};
    if (keep_oracle(counts, 6)) {
      ASSERT_LT(k, split.kept.size());
      EXPECT_EQ(split.kept[k++].final_score, c.final_score);
    } else {
      ASSERT_LT(d, split.dropped.size());
      EXPECT_EQ(split.dropped[d++].final_score, c.final_score);
    }
  }
  EXPECT_EQ(k, split.kept.size());
  EXPECT_EQ(d, split.dropped.size());
}

TEST(ScorePrompt, ThreeSamplesAveraged) {
  auto transport = std::make_shared<QueueTransport>(
      std::deque<std::string>{"Standards Met: [1,2,3,4,5,6]", "Standards Met: [1,2,3]", "Standards Met: [1,2,3,4,5,6,7,7]"});
  const Gateway gw(GatewayOptions{}, transport, nullptr);
  const auto card = score_prompt("Write a parser", gw, Mode::live, {"m", 0.7, 100});
  EXPECT_NEAR(card.final_score, 16.0 / 3.0, 1e-12);

  const auto reqs = scoring_requests("Write a parser", {"m", 0.7, 100});
  ASSERT_EQ(reqs.size(), 3u);
  EXPECT_EQ(reqs[0].prompt, reqs[2].prompt);
  EXPECT_NE(reqs[0].digest(), reqs[1].digest());
  EXPECT_NE(reqs[0].prompt.find("Write a parser"), std::string::npos);
}

TEST(ScorePrompt, AnyFailedSampleIsIncomplete) {
  auto transport = std::make_shared<QueueTransport>(
      std::deque<std::string>{"Standards Met: [1]", "I cannot evaluate this.", "Standards Met: [1]"});
  const Gateway gw(GatewayOptions{}, transport, nullptr);
  try {
    score_prompt("p", gw, Mode::live, {"m", 0.7, 100});
    FAIL() << "expected ScoringIncomplete";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScoringIncomplete);
    EXPECT_NE(e.detail().find("assessment 2"), std::string::npos);
  }
}

TEST(Complexity, ReadsLastJsonObject) {
  EXPECT_EQ(parse_complexity("Analysis...\nJson Output:\n```json\n{\"score\": 7}\n```"), 7);
  EXPECT_EQ(parse_complexity("json output {\"score\": 2} later {\"difficulty\": \"9\"}"), 9);
  EXPECT_EQ(parse_complexity("### Json Output\n{\"reason\": {\"a\": 1}, \"complexity\": 4}"), 4);
  auto code = [](const char* s) {
    try {
      parse_complexity(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code("score: 5"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Json Output: none"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Json Output {\"score\": 11}"), ErrorCode::OutOfRange);
  EXPECT_EQ(code("Json Output {\"score\": 0}"), ErrorCode::OutOfRange);
  EXPECT_EQ(code("Json Output {\"score\": 6.5}"), ErrorCode::ParseFailure);
  EXPECT_EQ(code("Json Output {\"level\": 6}"), ErrorCode::ParseFailure);
}

TEST(Stats, HandComputedCases) {
  const auto a = distribution_stats({3, 3, 4});
  EXPECT_NEAR(a.mean, 10.0 / 3.0, 1e-12);
  EXPECT_EQ(a.median, 3.0);
  EXPECT_NEAR(a.std, std::sqrt(2.0 / 9.0), 1e-12);
  const auto b = distribution_stats({1, 10});
  EXPECT_EQ(b.mean, 5.5);
  EXPECT_EQ(b.median, 5.5);
  EXPECT_EQ(b.std, 4.5);
  EXPECT_EQ(distribution_stats({7}).std, 0.0);
  EXPECT_THROW(distribution_stats({}), Error);
}

TEST(Stats, MatchesOracleOnRandomArrays) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    std::vector<int> xs(1 + rng() % 60);
    for (auto& x : xs) x = 1 + static_cast<int>(rng() % 10);
    const auto got = distribution_stats(xs);
    const auto want = stats_oracle(xs);
    ASSERT_NEAR(got.mean, want.mean, 1e-9);
    ASSERT_NEAR(got.median, want.median, 1e-9);
    ASSERT_NEAR(got.std, want.std, 1e-9);
    ASSERT_EQ(got.count, xs.size());
  }
}

TEST(Stats, HistogramBuckets) {
  const auto h = histogram({6.0, 6.0, 20.0 / 3.0, 5.0}, 2);
  EXPECT_EQ(h.at("6.00"), 2u);
  EXPECT_EQ(h.at("6.67"), 1u);
  EXPECT_EQ(h.at("5.00"), 1u);
}
