#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace instforge {

/// The seven question types shared by the reverse and backfeed flows.
enum class ProblemType {
  CodeGeneration,
  CodeUnderstanding,
  KnowledgeQuestion,
  CodeCompletion,
  CodeOptimization,
  Debug,
  ModifyCode,
};

inline constexpr std::array<ProblemType, 7> kAllProblemTypes = {
    ProblemType::CodeGeneration, ProblemType::CodeUnderstanding, ProblemType::KnowledgeQuestion,
    ProblemType::CodeCompletion, ProblemType::CodeOptimization,  ProblemType::Debug,
    ProblemType::ModifyCode};

std::string_view slug(ProblemType type) noexcept;
std::string_view display_name(ProblemType type) noexcept;
/// Accepts the slug ("code_generation") or display name ("Code Generation").
ProblemType parse_problem_type(std::string_view name);

/// The six ways the complicate stage can harden a prompt.
enum class ComplicationMethod {
  ConstraintAddition,
  DepthExtension,
  ConcreteSpecification,
  ReasoningRefinement,
  InputEnhancement,
  InnovationVariation,
};

inline constexpr std::array<ComplicationMethod, 6> kAllComplicationMethods = {
    ComplicationMethod::ConstraintAddition,  ComplicationMethod::DepthExtension,
    ComplicationMethod::ConcreteSpecification, ComplicationMethod::ReasoningRefinement,
    ComplicationMethod::InputEnhancement,    ComplicationMethod::InnovationVariation};

std::string_view display_name(ComplicationMethod method) noexcept;

enum class TemplateId {
  reverse_question,
  complicate,
  text_rewrite,
  extract_task,
  extract_instruction,
  extract_knowledge,
  kg_nodes,
  kg_relations,
  kg_phrases,
  backfeed_question,
  quality_filter,
  complexity_assess,
};

inline constexpr std::array<TemplateId, 12> kAllTemplateIds = {
    TemplateId::reverse_question, TemplateId::complicate,        TemplateId::text_rewrite,
    TemplateId::extract_task,     TemplateId::extract_instruction, TemplateId::extract_knowledge,
    TemplateId::kg_nodes,         TemplateId::kg_relations,      TemplateId::kg_phrases,
    TemplateId::backfeed_question, TemplateId::quality_filter,   TemplateId::complexity_assess};

std::string_view to_string(TemplateId id) noexcept;

struct TemplateKind {
  TemplateId id = TemplateId::quality_filter;
  std::optional<ProblemType> problem_type;  // set exactly for reverse/backfeed questions

  static TemplateKind reverse_question(ProblemType t) { return {TemplateId::reverse_question, t}; }
  static TemplateKind backfeed_question(ProblemType t) { return {TemplateId::backfeed_question, t}; }
  static TemplateKind plain(TemplateId id) { return {id, std::nullopt}; }

  /// "reverse_question:debug", "complicate", ...
  std::string tag() const;
  /// Inverse of tag(); throws UnknownKind.
  static TemplateKind parse(std::string_view tag);

  friend bool operator==(const TemplateKind&, const TemplateKind&) = default;
};

bool requires_problem_type(TemplateId id) noexcept;

using TemplateParams = std::map<std::string, std::string, std::less<>>;

struct RenderedPrompt {
  TemplateKind kind;
  std::string text;
  std::string params_digest;
};

/// Caller-supplied placeholders for a kind (type blocks are built in).
std::vector<std::string> required_params(TemplateId id);

/// Substitutes the embedded template. Throws MissingPlaceholder naming the
/// first absent key, UnknownKind for a kind/problem-type mismatch.
RenderedPrompt render(const TemplateKind& kind, const TemplateParams& params);

/// True if `text` still holds a `{{name}}` marker or a bare
/// [PROBLEM_TYPE]/[QUESTION_TYPE] token.
bool has_unresolved_placeholders(std::string_view text);

/// Raw template text as shipped in resources/templates.
std::string_view template_source(TemplateId id);

}  // namespace instforge
