// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kg_fixtures.hpp"
#include "injection.hpp"
#include "instforge/gate.hpp"
#include "instforge/keyword_graph.hpp"
#include "instforge/pipeline.hpp"
#include "instforge/scoring.hpp"
#include "instforge/templates.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace instforge;
using namespace instforge::testing;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;  // first failure, or a skip note
};

/// Records the first failed expectation.
struct Check {
  Verdict v;
  void expect(bool cond, const std::string& what) {
    if (!cond && v.ok) {
      v.ok = false;
      v.detail = what;
    }
  }
};

struct Criterion {
  int number;
  std::string name;
  double limit_s;
  std::function<Verdict()> run;
};

const StaticGate& shipped_gate() {
  static const StaticGate gate(RuleConfig::load(config_file("rules.json")),
                               AnalyzerRegistry::load(config_file("analyzers.lock")));
  return gate;
}

std::string fenced(const std::string& tag, const std::string& body) { return "Answer:\n```" + tag + "\n" + body + "```\n"; }

Verdict golden_suite() {
  Check c;
  const RuleConfig rules = RuleConfig::load(config_file("rules.json"));
  std::set<std::string> seen;
  for (const auto& g : golden_cases()) {
    const auto report = golden_report(g, rules);
    c.expect(report.status == ReportStatus::fail, g.name + " did not fail");
    for (const auto& i : report.issues) {
      if (i.severity != Severity::error) continue;
      if (i.rule_name == "E0001:syntax-error") seen.insert("syntax");
      if (i.rule_name == "no-prototype-builtins" && i.position.start_line == 20) seen.insert("prototype@20");
      if (i.rule_name == "PRS:") seen.insert("prs");
    }
  }
  c.expect(seen.contains("syntax"), "no E0001:syntax-error error");
  c.expect(seen.contains("prototype@20"), "no no-prototype-builtins error at line 20");
  c.expect(seen.contains("prs"), "no PRS: error");
  return c.v;
}

Verdict live_smoke() {
  Check c;
  const auto& gate = shipped_gate();
  std::vector<std::string> skipped;
  for (const auto& [name, lang] : {std::pair{"b1_python", Language::python}, std::pair{"b4_javascript", Language::javascript}}) {
    if (!gate.registry().available(lang)) {
      skipped.push_back(name);
      continue;
    }
    const auto v = gate.gate_response(text::read_file(fixture(std::string(name) + ".response.md")));
    std::size_t errors = 0;
    for (const auto& b : v.blocks) {
      for (const auto& i : b.report.issues) errors += i.severity == Severity::error;
    }
    c.expect(!v.pass && errors >= 1, std::string(name) + " produced no error");
  }
  const std::vector<std::tuple<Language, std::string, std::string>> hello = {
      {Language::python, "python", "print(\"hello, world\")\n"},
      {Language::javascript, "javascript", "console.log(\"hello, world\");\n"},
      {Language::java, "java",
       "public class Hello {\n  public static void main(String[] args) {\n    System.out.println(\"hello\");\n  }\n}\n"},
      {Language::c_cpp, "cpp", "#include <cstdio>\n\nint main() {\n  std::printf(\"hello, world\\n\");\n  return 0;\n}\n"},
      {Language::sql, "sql", "SELECT 1;\n"},
  };
  for (const auto& [lang, tag, body] : hello) {
    if (!gate.registry().available(lang)) {
      skipped.push_back(tag);
      continue;
    }
    c.expect(gate.gate_response(fenced(tag, body)).pass, "hello world failed for " + tag);
  }
  if (c.v.ok && !skipped.empty()) c.v.detail = "skipped, analyzer absent: " + text::join(skipped, ", ");
  return c.v;
}

Verdict injection() {
  Check c;
  std::vector<Language> langs;
  for (auto l : {Language::python, Language::javascript, Language::c_cpp, Language::sql}) {
    if (shipped_gate().registry().available(l)) langs.push_back(l);
  }
  if (langs.empty()) return {false, "no analyzers installed"};
  const auto pairs = injection_set(1000, 100, langs);
  std::vector<std::string> responses;
  for (const auto& p : pairs) responses.push_back(p.response);
  const auto verdicts = shipped_gate().gate_responses(responses);
  std::size_t rejected = 0, true_rejects = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool reject = !verdicts[i].ok() || !verdicts[i]->pass;
    rejected += reject;
    true_rejects += reject && pairs[i].broken;
    c.expect(reject == pairs[i].broken, "pair " + std::to_string(i) + (reject ? " wrongly rejected" : " wrongly passed"));
  }
  c.expect(rejected == 100 && true_rejects == 100,
           "rejected " + std::to_string(rejected) + ", of which broken " + std::to_string(true_rejects));
  if (c.v.ok && langs.size() < 4) c.v.detail = "ran on " + std::to_string(langs.size()) + " languages";
  return c.v;
}

std::vector<double> at_cosine(double c) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  v[0] = c;
  v[1] = std::sqrt(1.0 - c * c);
  return v;
}

KeywordGroup group_with(std::vector<double> e, std::string name) {
  KeywordGroup g;
  g.members = {std::move(name)};
  g.embedding = std::move(e);
  return g;
}

Verdict dedup() {
  Check c;
  const auto base = group_with(at_cosine(1.0), "base");
  c.expect(dedup_groups({base, group_with(at_cosine(0.79), "near")}, 0.8).size() == 2, "0.79 pair was not kept");
  c.expect(dedup_groups({base, group_with(at_cosine(0.81), "dup")}, 0.8).size() == 1, "0.81 pair was not dropped");
  std::mt19937_64 rng(20);
  const std::vector<std::string> words = {"cache", "queue", "graph", "sql",  "index", "thread",
                                          "lock",  "parse", "tree",  "heap", "sort",  "hash"};
  std::vector<KeywordGroup> groups;
  for (int i = 0; i < 1000; ++i) {
    KeywordGroup g;
    for (int k = 0; k < 2 + static_cast<int>(rng() % 3); ++k) g.members.push_back(words[rng() % words.size()]);
    g.embedding = embed(g.members);
    groups.push_back(std::move(g));
  }
  const auto once = dedup_groups(groups, 0.8);
  const auto twice = dedup_groups(once, 0.8);
  c.expect(once.size() == twice.size(), "dedup is not idempotent");
  for (std::size_t i = 0; i < std::min(once.size(), twice.size()); ++i) {
    c.expect(once[i].members == twice[i].members, "dedup reordered groups");
  }
  return c.v;
}

Verdict scoring() {
  Check c;
  const auto a7 = parse_standards_met("Evaluation Process: ...\nStandards Met: [1, 2, 4, 6, 7]");
  c.expect(a7.met == std::set<int>{1, 2, 4, 6, 7}, "standards list differs from [1, 2, 4, 6, 7]");

  std::mt19937_64 rng(5);
  std::vector<ScoreCard> cards;
  for (int i = 0; i < 10000; ++i) {
    cards.push_back(
        ScoreCard::from_assessments({random_assessment(rng), random_assessment(rng), random_assessment(rng)}));
  }
  const auto split = filter_by_score(cards);
  std::size_t kept = 0;
  for (const auto& card : cards) {
    const std::array<int, 3> counts = {static_cast<int>(card.assessments[0].met.size()),
                                       static_cast<int>(card.assessments[1].met.size()),
                                       static_cast<int>(card.assessments[2].met.size())};
    kept += keep_oracle(counts, 6);
  }
  c.expect(split.kept.size() == kept && split.dropped.size() == cards.size() - kept, "keep/drop count mismatch");

  for (int i = 0; i < 1000; ++i) {
    std::vector<int> xs(1 + rng() % 200);
    for (auto& x : xs) x = 1 + static_cast<int>(rng() % 10);
    const auto got = distribution_stats(xs);
    const auto want = stats_oracle(xs);
    c.expect(std::abs(got.mean - want.mean) <= 1e-9 && std::abs(got.median - want.median) <= 1e-9 &&
                 std::abs(got.std - want.std) <= 1e-9,
             "stats differ from oracle on array " + std::to_string(i));
  }
  return c.v;
}

NodeSet node_set(const std::vector<KeywordNode>& nodes) {
  NodeSet s;
  for (const auto& n : nodes) s.add(n);
  return s;
}

Verdict knowledge_graph() {
  Check c;
  const auto nodes = parse_nodes(kNodeExample);
  c.expect(nodes.nodes.size() == 8 && nodes.failures.empty(), "node example did not give 8 typed nodes");
  for (const auto& ex : relation_examples()) {
    const auto set = node_set(parse_nodes(ex.nodes).nodes);
    const auto parse = parse_triples(ex.triples, set);
    c.expect(parse.failures.empty(), "relation example rejected a triple");
    for (const auto& t : parse.triples) {
      c.expect(relation_allowed(t.relation, t.subject.kind, t.object.kind), "illegal triple " + t.id());
    }
  }
  try {
    parse_triple_line(kReversedTriple, node_set(parse_nodes(relation_examples()[0].nodes).nodes));
    c.expect(false, "reversed triple accepted");
  } catch (const Error& e) {
    c.expect(e.code() == ErrorCode::IllegalRelation, std::string("reversed triple: ") + e.what());
  }
  const auto g1 = build_groups(parse_associations(kPhraseExample1, phrase_example1_nodes()).triples);
  c.expect(g1.size() == 1 && g1[0].members == phrase_example1_group(), "phrase example 1 group differs");
  c.expect(build_groups(parse_associations(kPhraseExample2, phrase_example2_nodes()).triples).empty(),
           "phrase example 2 produced groups");
  return c.v;
}

Verdict determinism() {
  Check c;
  const auto cfg = PipelineConfig::load(config_file("pipeline.json"));
  TempDir a("accept-a"), b("accept-b");
  const auto ra = Pipeline(cfg).run_all(a.path());
  const auto rb = Pipeline(cfg).run_all(b.path());
  c.expect(!text::read_file(ra.dataset).empty(), "empty dataset");
  c.expect(text::read_file(ra.dataset) == text::read_file(rb.dataset), "datasets differ");
  c.expect(text::read_file(a.path() / "manifests.jsonl") == text::read_file(b.path() / "manifests.jsonl"),
           "manifests differ");
  for (const auto* run : {&ra, &rb}) {
    for (const auto& m : run->manifests) c.expect(m.conserved(), "stage " + m.stage + " not conserved");
  }
  return c.v;
}

Verdict templates() {
  Check c;
  std::size_t rendered = 0;
  for (auto id : kAllTemplateIds) {
    TemplateParams params;
    for (const auto& key : required_params(id)) params[key] = "sample " + key;
    std::vector<TemplateKind> kinds;
    if (requires_problem_type(id)) {
      for (auto t : kAllProblemTypes) kinds.push_back({id, t});
    } else {
      kinds.push_back(TemplateKind::plain(id));
    }
    for (const auto& kind : kinds) {
      const auto text = render(kind, params).text;
      ++rendered;
      c.expect(!has_unresolved_placeholders(text), kind.tag() + " has unresolved placeholders");
      c.expect(text.find("{{") == std::string::npos && text.find("[PROBLEM_TYPE]") == std::string::npos &&
                   text.find("[QUESTION_TYPE]") == std::string::npos,
               kind.tag() + " leaks a marker");
    }
  }
  c.expect(rendered == 24, "rendered " + std::to_string(rendered) + " templates");
  return c.v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden tool outputs normalize to failing reports", 5, golden_suite},
      {2, "live analyzers flag golden bodies and pass hello world", 120, live_smoke},
      {3, "gate rejects exactly the 100 broken of 1000 pairs", 120, injection},
      {4, "dedup boundary and idempotence", 5, dedup},
      {5, "standards parsing, keep rule and statistics", 10, scoring},
      {6, "keyword graph fixtures", 5, knowledge_graph},
      {7, "replay run-all is byte-identical and conserved", 60, determinism},
      {8, "templates render without placeholders", 1, templates},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = cr.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.ok && secs > cr.limit_s) {
      v.ok = false;
      v.detail = "over time limit";
    }
    failures += !v.ok;
    std::printf("%s [%d] %s (%.2f s, limit %.0f s)%s%s\n", v.ok ? "PASS" : "FAIL", cr.number, cr.name.c_str(), secs,
                cr.limit_s, v.detail.empty() ? "" : ": ", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
