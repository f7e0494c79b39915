#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instforge/error.hpp"
#include "instforge/jsonl.hpp"

namespace instforge {

enum class NodeKind { Task, Instruction, KnowledgePoint };

std::string_view to_string(NodeKind kind) noexcept;
/// "task", "instruction", "knowledge point" (case-insensitive; '_' or '-'
/// may replace the space). Throws ParseFailure.
NodeKind parse_node_kind(std::string_view name);

struct KeywordNode {
  std::string id;
  NodeKind kind = NodeKind::Task;
  friend bool operator==(const KeywordNode&, const KeywordNode&) = default;
};

enum class Relation { Requires, Contains, Displays, Unrelated };

std::string_view to_string(Relation rel) noexcept;

/// Legality table: Task->Instruction requires; Task->KnowledgePoint and
/// Instruction->KnowledgePoint contains; Instruction<->KnowledgePoint
/// displays; unrelated for any pair.
bool relation_allowed(Relation rel, NodeKind subject, NodeKind object) noexcept;

struct Triple {
  KeywordNode subject;
  Relation relation = Relation::Unrelated;
  KeywordNode object;

  /// "subject|relation|object"
  std::string id() const;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Nodes keyed by id; the first kind seen for an id is kept.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<KeywordNode> nodes);

  /// False when the id is already present.
  bool add(KeywordNode node);
  /// Exact match first, then ASCII case-insensitive.
  const KeywordNode* find(std::string_view id) const;
  const std::vector<KeywordNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  std::vector<KeywordNode> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::size_t, std::less<>> folded_;
};

struct LineFailure {
  std::size_t line_no = 0;  // 1-based
  std::string line;
  Error error;
};

struct NodeParse {
  std::vector<KeywordNode> nodes;
  std::vector<LineFailure> failures;
};

/// Every `Node(id="...", type="...")` line; other lines are ignored.
/// Unknown types and empty ids are collected as ParseFailure.
NodeParse parse_nodes(std::string_view text);

struct TripleParse {
  std::vector<Triple> triples;
  std::vector<LineFailure> failures;
};

/// One "subject relation object" line. Throws UnknownNode or IllegalRelation.
/// Returns nothing for lines without a relation keyword.
std::optional<Triple> parse_triple_line(std::string_view line, const NodeSet& nodes);

/// All triple lines of a relation-analysis answer; line errors are collected.
TripleParse parse_triples(std::string_view text, const NodeSet& nodes);

/// Association phrasing ("needs", "based on", "contains", "unrelated to"):
/// each related phrase maps to the legal relation for the endpoint kinds.
TripleParse parse_associations(std::string_view text, const NodeSet& nodes);

struct KeywordGroup {
  std::vector<std::string> members;  // task, knowledge points, instructions
  std::vector<double> embedding;     // unit norm
  std::vector<std::string> lineage;  // contributing triple ids
  std::string partition;             // dedup scope when partitioned

  Json to_json(bool with_embedding = false) const;
  static KeywordGroup from_json(const Json& j);
};

inline constexpr std::size_t kEmbeddingDim = 1024;

using Embedder = std::function<std::vector<double>(const std::vector<std::string>&)>;

/// Hashed character-3-gram term frequencies of the sorted, space-joined
/// members, L2-normalized. Order-independent.
std::vector<double> embed(const std::vector<std::string>& members);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// One group per Task of each component over non-unrelated triples.
std::vector<KeywordGroup> build_groups(const std::vector<Triple>& triples, const Embedder& embedder = embed);

/// Greedy scan in input order; a group is dropped when its similarity with
/// an already kept group is >= threshold. With `partitioned`, only groups
/// sharing a partition are compared.
std::vector<KeywordGroup> dedup_groups(const std::vector<KeywordGroup>& groups, double threshold = 0.8,
                                       bool partitioned = false);

/// Keyword vocabularies per kind: trimmed, case-preserved, duplicate-free.
class Vocabulary {
 public:
  /// One keyword per line. Returns the number newly inserted. Throws FileNotFound.
  std::size_t ingest(const std::filesystem::path& path, NodeKind kind);
  bool add(std::string_view keyword, NodeKind kind);
  const std::vector<std::string>& entries(NodeKind kind) const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::map<NodeKind, std::vector<std::string>> entries_;
  std::map<NodeKind, std::map<std::string, bool, std::less<>>> seen_;
  std::vector<std::string> warnings_;
};

}  // namespace instforge
