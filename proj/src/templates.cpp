#include "instforge/templates.hpp"

#include <cctype>

#include "instforge/digest.hpp"
#include "instforge/error.hpp"
#include "instforge/jsonl.hpp"
#include "instforge/text.hpp"

namespace instforge {

namespace detail {
const std::map<std::string, std::string_view, std::less<>>& embedded_resources();
}

namespace {

std::string_view resource(const std::string& name) {
  const auto& all = detail::embedded_resources();
  auto it = all.find(name);
  if (it == all.end()) throw Error(ErrorCode::UnknownKind, "no embedded resource " + name);
  return it->second;
}

/// Sections of a problem-type block file ("@@ name" headers).
std::map<std::string, std::string, std::less<>> parse_type_block(std::string_view src) {
  std::map<std::string, std::string, std::less<>> sections;
  std::string current;
  std::vector<std::string> lines;
  auto flush = [&] {
    if (!current.empty()) sections[current] = text::join(lines, "\n");
    lines.clear();
  };
  for (const auto& line : text::split_lines(src)) {
    if (line.rfind("@@ ", 0) == 0) {
      flush();
      current = std::string(text::trim(std::string_view(line).substr(3)));
    } else {
      lines.push_back(line);
    }
  }
  flush();
  return sections;
}

bool is_name_char(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }

/// Single pass: substituted values are never rescanned.
std::string substitute(std::string_view tpl, const TemplateParams& values) {
  std::string out;
  out.reserve(tpl.size() * 2);
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl.compare(i, 2, "{{") == 0) {
      std::size_t j = i + 2;
      while (j < tpl.size() && is_name_char(tpl[j])) ++j;
      if (j > i + 2 && tpl.compare(j, 2, "}}") == 0) {
        const auto name = tpl.substr(i + 2, j - i - 2);
        auto it = values.find(name);
        if (it == values.end()) throw Error(ErrorCode::MissingPlaceholder, std::string(name));
        out += it->second;
        i = j + 2;
        continue;
      }
    }
    out += tpl[i++];
  }
  return out;
}

}  // namespace

std::string_view slug(ProblemType type) noexcept {
  switch (type) {
    case ProblemType::CodeGeneration: return "code_generation";
    case ProblemType::CodeUnderstanding: return "code_understanding";
    case ProblemType::KnowledgeQuestion: return "knowledge_question";
    case ProblemType::CodeCompletion: return "code_completion";
    case ProblemType::CodeOptimization: return "code_optimization";
    case ProblemType::Debug: return "debug";
    case ProblemType::ModifyCode: return "modify_code";
  }
  return "code_generation";
}

std::string_view display_name(ProblemType type) noexcept {
  switch (type) {
    case ProblemType::CodeGeneration: return "Code Generation";
    case ProblemType::CodeUnderstanding: return "Code Understanding";
    case ProblemType::KnowledgeQuestion: return "Knowledge-based Question";
    case ProblemType::CodeCompletion: return "Code Completion";
    case ProblemType::CodeOptimization: return "Code Optimization";
    case ProblemType::Debug: return "Debug";
    case ProblemType::ModifyCode: return "Modify Code";
  }
  return "Code Generation";
}

ProblemType parse_problem_type(std::string_view name) {
  for (auto t : kAllProblemTypes) {
    if (text::iequals(name, slug(t)) || text::iequals(name, display_name(t))) return t;
  }
  throw Error(ErrorCode::UnknownKind, "unknown problem type '" + std::string(name) + "'");
}

std::string_view display_name(ComplicationMethod method) noexcept {
  switch (method) {
    case ComplicationMethod::ConstraintAddition: return "Constraint Addition";
    case ComplicationMethod::DepthExtension: return "Depth Extension";
    case ComplicationMethod::ConcreteSpecification: return "Concrete Specification";
    case ComplicationMethod::ReasoningRefinement: return "Reasoning Refinement";
    case ComplicationMethod::InputEnhancement: return "Input Enhancement";
    case ComplicationMethod::InnovationVariation: return "Innovation Variation";
  }
  return "Constraint Addition";
}

std::string_view to_string(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::reverse_question: return "reverse_question";
    case TemplateId::complicate: return "complicate";
    case TemplateId::text_rewrite: return "text_rewrite";
    case TemplateId::extract_task: return "extract_task";
    case TemplateId::extract_instruction: return "extract_instruction";
    case TemplateId::extract_knowledge: return "extract_knowledge";
    case TemplateId::kg_nodes: return "kg_nodes";
    case TemplateId::kg_relations: return "kg_relations";
    case TemplateId::kg_phrases: return "kg_phrases";
    case TemplateId::backfeed_question: return "backfeed_question";
    case TemplateId::quality_filter: return "quality_filter";
    case TemplateId::complexity_assess: return "complexity_assess";
  }
  return "unknown";
}

bool requires_problem_type(TemplateId id) noexcept {
  return id == TemplateId::reverse_question || id == TemplateId::backfeed_question;
}

std::string TemplateKind::tag() const {
  std::string t(to_string(id));
  if (problem_type) {
    t += ':';
    t += slug(*problem_type);
  }
  return t;
}

TemplateKind TemplateKind::parse(std::string_view tag) {
  auto colon = tag.find(':');
  auto name = tag.substr(0, colon);
  for (auto id : kAllTemplateIds) {
    if (name != to_string(id)) continue;
    TemplateKind kind{id, std::nullopt};
    if (colon != std::string_view::npos) kind.problem_type = parse_problem_type(tag.substr(colon + 1));
    if (requires_problem_type(id) != kind.problem_type.has_value()) break;
    return kind;
  }
  throw Error(ErrorCode::UnknownKind, std::string(tag));
}

std::vector<std::string> required_params(TemplateId id) {
  switch (id) {
    case TemplateId::reverse_question: return {"code_snippet"};
    case TemplateId::complicate: return {"method", "prompt"};
    case TemplateId::text_rewrite: return {"question"};
    case TemplateId::extract_task:
    case TemplateId::extract_instruction:
    case TemplateId::extract_knowledge: return {"problem"};
    case TemplateId::kg_nodes: return {"keywords"};
    case TemplateId::kg_relations: return {"nodes"};
    case TemplateId::kg_phrases: return {"triples"};
    case TemplateId::backfeed_question: return {"keywords"};
    case TemplateId::quality_filter: return {"prompt"};
    case TemplateId::complexity_assess: return {"question"};
  }
  return {};
}

std::string_view template_source(TemplateId id) {
  return resource("templates/" + std::string(to_string(id)) + ".txt");
}

RenderedPrompt render(const TemplateKind& kind, const TemplateParams& params) {
  if (requires_problem_type(kind.id) != kind.problem_type.has_value()) {
    throw Error(ErrorCode::UnknownKind, "problem type mismatch for " + kind.tag());
  }
  for (const auto& key : required_params(kind.id)) {
    if (!params.contains(key)) throw Error(ErrorCode::MissingPlaceholder, key);
  }

  TemplateParams values = params;
  if (kind.problem_type) {
    auto block = parse_type_block(resource("problem_types/" + std::string(slug(*kind.problem_type)) + ".txt"));
    for (auto& [k, v] : block) values.insert_or_assign(k, v);
    values["problem_type"] = std::string(display_name(*kind.problem_type));
  }

  // A slot alone on its line whose value is empty drops the whole line, so
  // parameter text itself is never reflowed.
  std::string source;
  for (const auto& line : text::split_lines(template_source(kind.id))) {
    const auto t = text::trim(line);
    if (t.size() > 4 && t.starts_with("{{") && t.ends_with("}}")) {
      auto it = values.find(t.substr(2, t.size() - 4));
      if (it != values.end() && it->second.empty()) continue;
    }
    source += line;
    source += '\n';
  }
  if (!template_source(kind.id).ends_with('\n') && !source.empty()) source.pop_back();
  std::string body = substitute(source, values);

  nlohmann::json digest_input;
  digest_input["kind"] = kind.tag();
  digest_input["params"] = nlohmann::json::object();
  for (const auto& [k, v] : params) digest_input["params"][k] = v;

  return RenderedPrompt{kind, std::move(body), canonical_digest(digest_input)};
}

bool has_unresolved_placeholders(std::string_view s) {
  if (s.find("[PROBLEM_TYPE") != std::string_view::npos) return true;
  if (s.find("[QUESTION_TYPE") != std::string_view::npos) return true;
  if (s.find("[QUESTION_PURPOSE") != std::string_view::npos) return true;
  for (std::size_t i = s.find("{{"); i != std::string_view::npos; i = s.find("{{", i + 1)) {
    std::size_t j = i + 2;
    while (j < s.size() && is_name_char(s[j])) ++j;
    if (j > i + 2 && s.compare(j, 2, "}}") == 0) return true;
  }
  return false;
}

}  // namespace instforge
