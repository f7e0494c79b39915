#include <gtest/gtest.h>

#include "instforge/keyword_graph.hpp"
#include "instforge/mock_responder.hpp"
#include "instforge/output_parsers.hpp"
#include "instforge/scoring.hpp"

using namespace instforge;

namespace {

const std::string kSnippet =
    "def moving_average(values, window):\n    out = []\n    for i in range(len(values) - window + 1):\n"
    "        out.append(sum(values[i:i + window]) / window)\n    return out\n";

const std::string kQuestion =
    "Write a Python function that returns the moving average of a list. Handle windows larger than the list.";

std::string prompt_for(TemplateId id) {
  TemplateParams p;
  switch (id) {
    case TemplateId::reverse_question:
      return render(TemplateKind::reverse_question(ProblemType::Debug), {{"code_snippet", kSnippet}}).text;
    case TemplateId::backfeed_question:
      return render(TemplateKind::backfeed_question(ProblemType::CodeGeneration),
                    {{"keywords", "[Task]: create game\n[Instruction]: record time\n[Knowledge Point]: recursion"}})
          .text;
    case TemplateId::complicate: p = {{"method", "Depth Extension"}, {"prompt", kQuestion}}; break;
    case TemplateId::text_rewrite: p = {{"question", kQuestion}}; break;
    case TemplateId::extract_task:
    case TemplateId::extract_instruction:
    case TemplateId::extract_knowledge: p = {{"problem", kQuestion}}; break;
    case TemplateId::kg_nodes: p = {{"keywords", "[create game] [record time] [recursion]"}}; break;
    case TemplateId::kg_relations:
      p = {{"nodes", "Node(id=\"create game\", type=\"Task\")\nNode(id=\"record time\", type=\"Instruction\")\n"
                     "Node(id=\"recursion\", type=\"KnowledgePoint\")"}};
      break;
    case TemplateId::kg_phrases: p = {{"triples", "create game requires record time\ncreate game contains recursion"}}; break;
    case TemplateId::quality_filter: p = {{"prompt", kQuestion}}; break;
    case TemplateId::complexity_assess: p = {{"question", kQuestion}}; break;
  }
  return render(TemplateKind::plain(id), p).text;
}

}  // namespace

TEST(MockResponder, DetectsEveryTemplate) {
  for (auto id : kAllTemplateIds) {
    const auto got = MockResponder::detect(prompt_for(id));
    ASSERT_TRUE(got) << to_string(id);
    EXPECT_EQ(*got, id) << to_string(id);
  }
  EXPECT_FALSE(MockResponder::detect("Write a function that reverses a string."));
}

TEST(MockResponder, AnswersParseWithTheirParsers) {
  MockResponder mock;
  EXPECT_FALSE(parse_reverse_output(mock.respond(prompt_for(TemplateId::reverse_question))).description.empty());
  EXPECT_NE(parse_complicate_output(mock.respond(prompt_for(TemplateId::complicate))).find("moving average"),
            std::string::npos);
  EXPECT_FALSE(parse_rewrite_output(mock.respond(prompt_for(TemplateId::text_rewrite))).empty());
  EXPECT_NO_THROW(parse_keyword_output(mock.respond(prompt_for(TemplateId::extract_task)), KeywordDimension::Task));
  EXPECT_NO_THROW(
      parse_keyword_output(mock.respond(prompt_for(TemplateId::extract_instruction)), KeywordDimension::Instruction));
  EXPECT_NO_THROW(
      parse_keyword_output(mock.respond(prompt_for(TemplateId::extract_knowledge)), KeywordDimension::Knowledge));
  const auto nodes = parse_nodes(mock.respond(prompt_for(TemplateId::kg_nodes)));
  EXPECT_EQ(nodes.nodes.size(), 3u);
  EXPECT_TRUE(nodes.failures.empty());
  const NodeSet set{{"create game", NodeKind::Task},
                    {"record time", NodeKind::Instruction},
                    {"recursion", NodeKind::KnowledgePoint}};
  const auto triples = parse_triples(mock.respond(prompt_for(TemplateId::kg_relations)), set);
  EXPECT_FALSE(triples.triples.empty());
  EXPECT_TRUE(triples.failures.empty());
  EXPECT_FALSE(mock.respond(prompt_for(TemplateId::kg_phrases)).empty());
  EXPECT_FALSE(parse_backfeed_output(mock.respond(prompt_for(TemplateId::backfeed_question))).empty());
  const auto quality = parse_standards_met(mock.respond(prompt_for(TemplateId::quality_filter)));
  for (int c : quality.met) {
    EXPECT_GE(c, 1);
    EXPECT_LE(c, kCriteriaCount);
  }
}

TEST(MockResponder, DeterministicAcrossInstances) {
  MockResponder a, b;
  for (auto id : kAllTemplateIds) {
    if (id == TemplateId::quality_filter) continue;
    const auto p = prompt_for(id);
    EXPECT_EQ(a.respond(p), b.respond(p)) << to_string(id);
    EXPECT_EQ(a.respond(p), b.respond(p)) << to_string(id);
  }
}

TEST(MockResponder, QualitySamplesFollowCallOrder) {
  MockResponder a, b;
  const auto p = prompt_for(TemplateId::quality_filter);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a.respond(p), b.respond(p));
}

TEST(MockResponder, BrokenAnswersAreAMinority) {
  int broken = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    if (MockResponder::answer_is_broken("Implement task number " + std::to_string(i))) ++broken;
  }
  EXPECT_GT(broken, n / 16);
  EXPECT_LT(broken, n / 4);
}

TEST(MockTransport, BodyIsAChatCompletion) {
  MockTransport t;
  const Json payload = {{"model", "m"},
                        {"messages", Json::array({{{"role", "user"}, {"content", "Explain recursion."}}})}};
  const auto r = t.post(payload.dump());
  EXPECT_EQ(r.status, 200);
  const auto body = Json::parse(r.body);
  EXPECT_FALSE(body["choices"][0]["message"]["content"].get<std::string>().empty());
  EXPECT_EQ(Json::parse(MockTransport::completion_body("hi"))["choices"][0]["message"]["content"], "hi");
}
