#include "instforge/keyword_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "instforge/text.hpp"

namespace instforge {

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Task: return "task";
    case NodeKind::Instruction: return "instruction";
    case NodeKind::KnowledgePoint: return "knowledge point";
  }
  return "task";
}

NodeKind parse_node_kind(std::string_view name) {
  auto s = text::to_lower(text::trim(name));
  std::replace(s.begin(), s.end(), '_', ' ');
  std::replace(s.begin(), s.end(), '-', ' ');
  if (s == "task") return NodeKind::Task;
  if (s == "instruction" || s == "instructions") return NodeKind::Instruction;
  if (s == "knowledge point" || s == "knowledge points" || s == "knowledgepoint") return NodeKind::KnowledgePoint;
  throw Error(ErrorCode::ParseFailure, "unknown node type '" + std::string(name) + "'");
}

std::string_view to_string(Relation rel) noexcept {
  switch (rel) {
    case Relation::Requires: return "requires";
    case Relation::Contains: return "contains";
    case Relation::Displays: return "displays";
    case Relation::Unrelated: return "unrelated";
  }
  return "unrelated";
}

bool relation_allowed(Relation rel, NodeKind s, NodeKind o) noexcept {
  using K = NodeKind;
  switch (rel) {
    case Relation::Unrelated: return true;
    case Relation::Requires: return s == K::Task && o == K::Instruction;
    case Relation::Contains: return (s == K::Task || s == K::Instruction) && o == K::KnowledgePoint;
    case Relation::Displays:
      return (s == K::Instruction && o == K::KnowledgePoint) || (s == K::KnowledgePoint && o == K::Instruction);
  }
  return false;
}

std::string Triple::id() const {
  return subject.id + "|" + std::string(to_string(relation)) + "|" + object.id;
}

NodeSet::NodeSet(std::initializer_list<KeywordNode> nodes) {
  for (const auto& n : nodes) add(n);
}

bool NodeSet::add(KeywordNode node) {
  if (index_.contains(node.id)) return false;
  index_.emplace(node.id, nodes_.size());
  folded_.emplace(text::to_lower(node.id), nodes_.size());
  nodes_.push_back(std::move(node));
  return true;
}

const KeywordNode* NodeSet::find(std::string_view id) const {
  if (auto it = index_.find(id); it != index_.end()) return &nodes_[it->second];
  if (auto it = folded_.find(text::to_lower(id)); it != folded_.end()) return &nodes_[it->second];
  return nullptr;
}

namespace {

/// Value of `key="..."` or `key='...'` starting at or after `from`.
std::optional<std::string> quoted_attr(std::string_view s, std::string_view key, std::size_t& from) {
  auto k = s.find(key, from);
  if (k == std::string_view::npos) return std::nullopt;
  auto i = k + key.size();
  while (i < s.size() && s[i] == ' ') ++i;
  if (i >= s.size() || s[i] != '=') return std::nullopt;
  ++i;
  while (i < s.size() && s[i] == ' ') ++i;
  if (i >= s.size() || (s[i] != '"' && s[i] != '\'')) return std::nullopt;
  const char quote = s[i];
  auto end = s.find(quote, i + 1);
  if (end == std::string_view::npos) return std::nullopt;
  from = end + 1;
  return std::string(s.substr(i + 1, end - i - 1));
}

std::string_view clean_line(std::string_view line) {
  auto s = text::trim(line);
  while (!s.empty() && (s.front() == '-' || s.front() == '*' || s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == '.' || s.back() == ';' || s.back() == ' ')) s.remove_suffix(1);
  return s;
}

struct Split {
  std::string_view subject;
  std::string_view keyword;
  std::string_view object;
};

/// Every split of `line` around a whole-word occurrence of one of `keywords`.
std::vector<Split> splits(std::string_view line, std::initializer_list<std::string_view> keywords) {
  std::vector<Split> out;
  for (auto kw : keywords) {
    for (auto pos = line.find(kw); pos != std::string_view::npos; pos = line.find(kw, pos + 1)) {
      const auto end = pos + kw.size();
      if (pos == 0 || line[pos - 1] != ' ' || end >= line.size() || line[end] != ' ') continue;
      out.push_back({text::trim(line.substr(0, pos)), kw, text::trim(line.substr(end))});
    }
  }
  return out;
}

std::string describe(const KeywordNode& n) { return std::string(to_string(n.kind)) + " '" + n.id + "'"; }

/// Resolves the first split whose endpoints are both known; `relate` maps
/// (keyword, subject, object) to a relation or throws IllegalRelation.
template <typename Relate>
std::optional<Triple> resolve(std::string_view raw, std::initializer_list<std::string_view> keywords,
                              const NodeSet& nodes, Relate relate) {
  const auto line = clean_line(raw);
  const auto candidates = splits(line, keywords);
  if (candidates.empty()) return std::nullopt;
  std::optional<Error> illegal;
  for (const auto& c : candidates) {
    const auto* s = nodes.find(c.subject);
    const auto* o = nodes.find(c.object);
    if (!s || !o) continue;
    try {
      return Triple{*s, relate(c.keyword, *s, *o), *o};
    } catch (const Error& e) {
      if (!illegal) illegal = e;
    }
  }
  if (illegal) throw *illegal;
  const auto& first = candidates.front();
  std::string missing;
  if (!nodes.find(first.subject)) missing = "'" + std::string(first.subject) + "'";
  if (!nodes.find(first.object)) missing += (missing.empty() ? "'" : ", '") + std::string(first.object) + "'";
  throw Error(ErrorCode::UnknownNode, missing + " in: " + std::string(line));
}

template <typename LineFn>
TripleParse parse_lines(std::string_view textv, LineFn fn) {
  TripleParse out;
  const auto lines = text::split_lines(textv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      if (auto t = fn(lines[i])) out.triples.push_back(std::move(*t));
    } catch (const Error& e) {
      out.failures.push_back({i + 1, lines[i], e});
    }
  }
  return out;
}

}  // namespace

NodeParse parse_nodes(std::string_view input) {
  NodeParse out;
  const auto lines = text::split_lines(input);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    auto start = line.find("Node(");
    if (start == std::string_view::npos) continue;
    try {
      std::size_t cursor = start;
      auto id = quoted_attr(line, "id", cursor);
      auto type = quoted_attr(line, "type", cursor);
      if (!id || !type) throw Error(ErrorCode::ParseFailure, "malformed node: " + excerpt(line));
      auto trimmed = std::string(text::trim(*id));
      if (trimmed.empty()) throw Error(ErrorCode::ParseFailure, "empty node id: " + excerpt(line));
      out.nodes.push_back({trimmed, parse_node_kind(*type)});
    } catch (const Error& e) {
      out.failures.push_back({i + 1, lines[i], e});
    }
  }
  return out;
}

std::optional<Triple> parse_triple_line(std::string_view line, const NodeSet& nodes) {
  return resolve(line, {"requires", "contains", "displays", "unrelated"}, nodes,
                 [](std::string_view kw, const KeywordNode& s, const KeywordNode& o) {
                   Relation rel = kw == "requires"   ? Relation::Requires
                                  : kw == "contains" ? Relation::Contains
                                  : kw == "displays" ? Relation::Displays
                                                     : Relation::Unrelated;
                   if (!relation_allowed(rel, s.kind, o.kind)) {
                     throw Error(ErrorCode::IllegalRelation,
                                 describe(s) + " " + std::string(kw) + " " + describe(o));
                   }
                   return rel;
                 });
}

TripleParse parse_triples(std::string_view input, const NodeSet& nodes) {
  return parse_lines(input, [&](std::string_view l) { return parse_triple_line(l, nodes); });
}

TripleParse parse_associations(std::string_view input, const NodeSet& nodes) {
  auto relate = [](std::string_view kw, const KeywordNode& s, const KeywordNode& o) {
    if (kw.starts_with("unrelated")) return Relation::Unrelated;
    using K = NodeKind;
    if (s.kind == K::Task && o.kind == K::Instruction) return Relation::Requires;
    if (s.kind == K::Task && o.kind == K::KnowledgePoint) return Relation::Contains;
    if ((s.kind == K::Instruction && o.kind == K::KnowledgePoint) ||
        (s.kind == K::KnowledgePoint && o.kind == K::Instruction)) {
      return Relation::Displays;
    }
    throw Error(ErrorCode::IllegalRelation, describe(s) + " " + std::string(kw) + " " + describe(o));
  };
  return parse_lines(input, [&](std::string_view l) {
    return resolve(l, {"unrelated to", "unrelated", "based on", "needs", "requires", "contains", "displays"}, nodes,
                   relate);
  });
}

Json KeywordGroup::to_json(bool with_embedding) const {
  Json j;
  j["members"] = members;
  j["lineage"] = lineage;
  if (!partition.empty()) j["partition"] = partition;
  if (with_embedding) j["embedding"] = embedding;
  return j;
}

KeywordGroup KeywordGroup::from_json(const Json& j) {
  KeywordGroup g;
  try {
    g.members = j.at("members").get<std::vector<std::string>>();
    if (j.contains("lineage")) g.lineage = j["lineage"].get<std::vector<std::string>>();
    if (j.contains("partition")) g.partition = j["partition"].get<std::string>();
    if (j.contains("embedding")) g.embedding = j["embedding"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("keyword group: ") + e.what());
  }
  if (g.members.empty()) throw Error(ErrorCode::ParseFailure, "keyword group without members");
  if (g.embedding.empty()) g.embedding = embed(g.members);
  return g;
}

std::vector<double> embed(const std::vector<std::string>& members) {
  auto sorted = members;
  std::sort(sorted.begin(), sorted.end());
  const std::string joined = " " + text::join(sorted, " ") + " ";

  std::vector<double> v(kEmbeddingDim, 0.0);
  for (std::size_t i = 0; i + 3 <= joined.size(); ++i) {
    std::uint64_t h = 14695981039346656037ULL;  // FNV-1a 64
    for (std::size_t k = i; k < i + 3; ++k) {
      h ^= static_cast<unsigned char>(joined[k]);
      h *= 1099511628211ULL;
    }
    v[h % kEmbeddingDim] += 1.0;
  }
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (auto& x : v) x /= norm;
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "embedding dimensions differ");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

std::vector<KeywordGroup> build_groups(const std::vector<Triple>& triples, const Embedder& embedder) {
  // Nodes in order of first appearance.
  std::vector<KeywordNode> order;
  std::map<std::string, std::size_t, std::less<>> index;
  auto intern = [&](const KeywordNode& n) {
    auto [it, fresh] = index.emplace(n.id, order.size());
    if (fresh) order.push_back(n);
    return it->second;
  };

  std::vector<std::size_t> parent;
  auto root = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> edge_triple;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& tr = triples[t];
    if (tr.relation == Relation::Unrelated) continue;
    auto a = intern(tr.subject);
    auto b = intern(tr.object);
    edges.emplace_back(a, b);
    edge_triple.push_back(t);
  }
  parent.resize(order.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [a, b] : edges) parent[root(a)] = root(b);

  std::vector<KeywordGroup> groups;
  for (std::size_t task = 0; task < order.size(); ++task) {
    if (order[task].kind != NodeKind::Task) continue;
    const auto comp = root(task);
    KeywordGroup g;
    g.members.push_back(order[task].id);
    for (auto kind : {NodeKind::KnowledgePoint, NodeKind::Instruction}) {
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i].kind == kind && root(i) == comp) g.members.push_back(order[i].id);
      }
    }
    if (g.members.size() < 2) continue;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (root(edges[e].first) == comp) g.lineage.push_back(triples[edge_triple[e]].id());
    }
    g.embedding = embedder(g.members);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<KeywordGroup> dedup_groups(const std::vector<KeywordGroup>& groups, double threshold, bool partitioned) {
  std::vector<KeywordGroup> kept;
  for (const auto& g : groups) {
    bool duplicate = false;
    for (const auto& k : kept) {
      if (partitioned && k.partition != g.partition) continue;
      if (dot(g.embedding, k.embedding) >= threshold) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(g);
  }
  return kept;
}

std::size_t Vocabulary::ingest(const std::filesystem::path& path, NodeKind kind) {
  const auto content = text::read_file(path);
  std::size_t inserted = 0;
  for (const auto& line : text::split_lines(content)) {
    if (add(line, kind)) ++inserted;
  }
  if (inserted == 0) warnings_.push_back(path.string() + ": no new keywords");
  return inserted;
}

bool Vocabulary::add(std::string_view keyword, NodeKind kind) {
  auto k = std::string(text::trim(keyword));
  if (k.empty()) return false;
  if (!seen_[kind].emplace(k, true).second) return false;
  entries_[kind].push_back(std::move(k));
  return true;
}

const std::vector<std::string>& Vocabulary::entries(NodeKind kind) const {
  static const std::vector<std::string> empty;
  auto it = entries_.find(kind);
  return it == entries_.end() ? empty : it->second;
}

}  // namespace instforge
