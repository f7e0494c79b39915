#include "instforge/lint.hpp"

#include "instforge/digest.hpp"
#include "instforge/error.hpp"
#include "instforge/text.hpp"

namespace instforge {

std::string_view to_string(ToolKind tool) noexcept {
  switch (tool) {
    case ToolKind::pylint: return "pylint";
    case ToolKind::eslint: return "eslint";
    case ToolKind::checkstyle: return "checkstyle";
    case ToolKind::javac: return "javac";
    case ToolKind::clang_tidy: return "clang-tidy";
    case ToolKind::sqlfluff: return "sqlfluff";
  }
  return "unknown";
}

ToolKind parse_tool_kind(std::string_view name) {
  for (auto t : {ToolKind::pylint, ToolKind::eslint, ToolKind::checkstyle, ToolKind::javac, ToolKind::clang_tidy,
                 ToolKind::sqlfluff}) {
    if (name == to_string(t)) return t;
  }
  if (name == "clang_tidy") return ToolKind::clang_tidy;
  throw Error(ErrorCode::ConfigError, "unknown tool '" + std::string(name) + "'");
}

namespace {

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::disabled: return "disabled";
    case Tier::error: return "error";
    case Tier::info: return "info";
  }
  return "info";
}

std::string_view to_string(DefaultPolicy p) {
  switch (p) {
    case DefaultPolicy::native: return "native";
    case DefaultPolicy::error: return "error";
    case DefaultPolicy::info: return "info";
  }
  return "native";
}

}  // namespace

RuleConfig RuleConfig::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "rule config must be an object of tools");
  RuleConfig cfg;
  for (const auto& [tool_name, body] : j.items()) {
    const auto tool = parse_tool_kind(tool_name);
    if (!body.is_object()) throw Error(ErrorCode::ConfigError, tool_name + ": expected an object");
    for (const auto& [key, value] : body.items()) {
      if (key == "default") {
        const auto p = value.is_string() ? value.get<std::string>() : std::string();
        if (p == "native") cfg.set_default(tool, DefaultPolicy::native);
        else if (p == "error") cfg.set_default(tool, DefaultPolicy::error);
        else if (p == "info") cfg.set_default(tool, DefaultPolicy::info);
        else throw Error(ErrorCode::ConfigError, tool_name + ".default must be native, error or info");
        continue;
      }
      Tier tier;
      if (key == "disabled") tier = Tier::disabled;
      else if (key == "error") tier = Tier::error;
      else if (key == "info") tier = Tier::info;
      else throw Error(ErrorCode::ConfigError, tool_name + ": unknown key '" + key + "'");
      if (!value.is_array()) throw Error(ErrorCode::ConfigError, tool_name + "." + key + " must be a list");
      for (const auto& rule : value) {
        if (!rule.is_string() || rule.get<std::string>().empty()) {
          throw Error(ErrorCode::ConfigError, tool_name + "." + key + " entries must be non-empty strings");
        }
        cfg.set(tool, rule.get<std::string>(), tier);
      }
    }
  }
  return cfg;
}

RuleConfig RuleConfig::load(const std::filesystem::path& path) {
  const auto content = text::read_file(path);
  auto j = Json::parse(content, nullptr, false, true);
  if (j.is_discarded()) throw Error(ErrorCode::ConfigError, path.string() + ": not valid JSON");
  try {
    return from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.detail());
  }
}

void RuleConfig::set(ToolKind tool, std::string rule, Tier tier) {
  auto& rules = tools_[tool].tiers;
  if (rules.contains(rule)) {
    throw Error(ErrorCode::ConfigError,
                "rule '" + rule + "' listed more than once for " + std::string(instforge::to_string(tool)));
  }
  rules.emplace(std::move(rule), tier);
}

void RuleConfig::set_default(ToolKind tool, DefaultPolicy policy) { tools_[tool].default_policy = policy; }

Tier RuleConfig::tier_for(ToolKind tool, const std::vector<std::string>& names, bool native_error) const {
  const auto native = native_error ? Tier::error : Tier::info;
  auto it = tools_.find(tool);
  if (it == tools_.end()) return native;
  const auto& rules = it->second;
  for (const auto& n : names) {
    if (auto r = rules.tiers.find(n); r != rules.tiers.end()) return r->second;
  }
  // Longest matching prefix pattern.
  std::size_t best = 0;
  std::optional<Tier> found;
  for (const auto& [key, tier] : rules.tiers) {
    if (key.empty() || key.back() != '*') continue;
    const auto prefix = std::string_view(key).substr(0, key.size() - 1);
    for (const auto& n : names) {
      if (n.starts_with(prefix) && (!found || prefix.size() > best)) {
        best = prefix.size();
        found = tier;
      }
    }
  }
  if (found) return *found;
  switch (rules.default_policy) {
    case DefaultPolicy::native: return native;
    case DefaultPolicy::error: return Tier::error;
    case DefaultPolicy::info: return Tier::info;
  }
  return native;
}

std::string RuleConfig::digest() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [tool, rules] : tools_) {
    auto& t = j[std::string(instforge::to_string(tool))];
    t["default"] = to_string(rules.default_policy);
    for (const auto& [rule, tier] : rules.tiers) t["rules"][rule] = to_string(tier);
  }
  return canonical_digest(j);
}

}  // namespace instforge
