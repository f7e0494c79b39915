#include "instforge/lint.hpp"

#include <algorithm>
#include <regex>

#include "instforge/error.hpp"
#include "instforge/text.hpp"

namespace instforge {

std::string_view to_string(Severity s) noexcept { return s == Severity::error ? "error" : "info"; }
std::string_view to_string(ReportStatus s) noexcept { return s == ReportStatus::fail ? "fail" : "pass"; }

Json LintIssue::to_json() const {
  Json j;
  j["rule_name"] = rule_name;
  j["message"] = message;
  j["position"] = Json{{"start_line", position.start_line}, {"end_line", position.end_line}};
  j["severity"] = to_string(severity);
  if (!file_path) j["content"] = content;
  j["language"] = language;
  if (file_path) j["file_path"] = *file_path;
  return j;
}

LintIssue LintIssue::from_json(const Json& j) {
  try {
    LintIssue i;
    i.rule_name = j.at("rule_name").get<std::string>();
    i.message = j.at("message").get<std::string>();
    i.position.start_line = j.at("position").at("start_line").get<int>();
    i.position.end_line = j.at("position").at("end_line").get<int>();
    const auto sev = j.at("severity").get<std::string>();
    if (sev != "error" && sev != "info") throw Error(ErrorCode::ParseFailure, "severity '" + sev + "'");
    i.severity = sev == "error" ? Severity::error : Severity::info;
    if (j.contains("content")) i.content = j["content"].get<std::string>();
    i.language = j.at("language").get<std::string>();
    if (j.contains("file_path")) i.file_path = j["file_path"].get<std::string>();
    return i;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("lint issue: ") + e.what());
  }
}

LintReport LintReport::from_issues(std::vector<LintIssue> issues) {
  LintReport r;
  r.issues = std::move(issues);
  const bool failed =
      std::any_of(r.issues.begin(), r.issues.end(), [](const LintIssue& i) { return i.severity == Severity::error; });
  r.status = failed ? ReportStatus::fail : ReportStatus::pass;
  return r;
}

Json LintReport::to_json() const {
  Json j;
  j["issues"] = Json::array();
  for (const auto& i : issues) j["issues"].push_back(i.to_json());
  j["status"] = to_string(status);
  return j;
}

LintReport LintReport::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("issues") || !j["issues"].is_array()) {
    throw Error(ErrorCode::ParseFailure, "lint report without issues array");
  }
  std::vector<LintIssue> issues;
  for (const auto& i : j["issues"]) issues.push_back(LintIssue::from_json(i));
  return from_issues(std::move(issues));
}

namespace {

[[noreturn]] void parse_failure(ToolKind tool, std::string_view why, std::string_view raw) {
  throw Error(ErrorCode::OutputParseFailure,
              std::string(to_string(tool)) + " output " + std::string(why) + ": " + excerpt(text::trim(raw)));
}

int as_line(const nlohmann::json& v, int fallback) {
  if (v.is_number_integer()) return std::max(1, v.get<int>());
  return fallback;
}

nlohmann::json parse_json(std::string_view output, ToolKind tool) {
  auto j = nlohmann::json::parse(output, nullptr, false);
  if (j.is_discarded()) parse_failure(tool, "is not JSON", output);
  if (!j.is_array()) parse_failure(tool, "is not a JSON array", output);
  return j;
}

std::vector<NativeFinding> parse_pylint(std::string_view output) {
  std::vector<NativeFinding> out;
  try {
    for (const auto& m : parse_json(output, ToolKind::pylint)) {
      NativeFinding f;
      f.file = m.value("path", "");
      const auto id = m.value("message-id", "");
      const auto symbol = m.value("symbol", "");
      f.names = {id + ":" + symbol, id, symbol};
      f.message = m.value("message", "");
      f.line = as_line(m.value("line", nlohmann::json()), 1);
      f.end_line = std::max(f.line, as_line(m.value("endLine", nlohmann::json()), f.line));
      const auto type = m.value("type", "");
      f.native_error = type == "error" || type == "fatal";
      out.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    parse_failure(ToolKind::pylint, e.what(), output);
  }
  return out;
}

std::vector<NativeFinding> parse_eslint(std::string_view output) {
  std::vector<NativeFinding> out;
  try {
    for (const auto& file : parse_json(output, ToolKind::eslint)) {
      const auto path = file.value("filePath", "");
      for (const auto& m : file.at("messages")) {
        NativeFinding f;
        f.file = path;
        const auto& rule = m.value("ruleId", nlohmann::json());
        f.names = {rule.is_string() ? rule.get<std::string>() : std::string("parse-error")};
        f.message = m.value("message", "");
        f.line = as_line(m.value("line", nlohmann::json()), 1);
        f.end_line = std::max(f.line, as_line(m.value("endLine", nlohmann::json()), f.line));
        f.native_error = m.value("severity", 0) == 2 || m.value("fatal", false);
        out.push_back(std::move(f));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    parse_failure(ToolKind::eslint, e.what(), output);
  }
  return out;
}

std::vector<NativeFinding> parse_sqlfluff(std::string_view output) {
  std::vector<NativeFinding> out;
  try {
    for (const auto& file : parse_json(output, ToolKind::sqlfluff)) {
      const auto path = file.value("filepath", "");
      for (const auto& v : file.at("violations")) {
        NativeFinding f;
        f.file = path;
        const auto code = v.value("code", "");
        const auto name = v.value("name", "");
        f.names = {code + ":" + name, code};
        if (!name.empty()) f.names.push_back(name);
        f.message = v.value("description", "");
        f.line = as_line(v.value("start_line_no", nlohmann::json()), 1);
        f.end_line = std::max(f.line, as_line(v.value("end_line_no", nlohmann::json()), f.line));
        f.native_error = (code == "PRS" || code == "TMP" || code == "LXR") && !v.value("warning", false);
        out.push_back(std::move(f));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    parse_failure(ToolKind::sqlfluff, e.what(), output);
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i];
      continue;
    }
    auto ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = 0;
      try {
        cp = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X') ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                                                                 : std::stoul(std::string(ent.substr(1)));
      } catch (const std::exception&) {
        out += s.substr(i, semi - i + 1);
        i = semi;
        continue;
      }
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      }
    } else {
      out += s.substr(i, semi - i + 1);
    }
    i = semi;
  }
  return out;
}

std::map<std::string, std::string> xml_attrs(std::string_view tag) {
  std::map<std::string, std::string> attrs;
  static const std::regex attr(R"re(([A-Za-z_:][-A-Za-z0-9_:.]*)\s*=\s*("([^"]*)"|'([^']*)'))re");
  const std::string s(tag);
  for (std::sregex_iterator it(s.begin(), s.end(), attr), end; it != end; ++it) {
    const auto& m = *it;
    attrs[m[1].str()] = xml_unescape(m[3].matched ? m[3].str() : m[4].str());
  }
  return attrs;
}

std::vector<NativeFinding> parse_checkstyle(std::string_view output) {
  std::vector<NativeFinding> out;
  if (text::trim(output).empty()) return out;
  if (output.find("<checkstyle") == std::string_view::npos) parse_failure(ToolKind::checkstyle, "is not checkstyle XML", output);

  std::string current_file;
  std::size_t pos = 0;
  while ((pos = output.find('<', pos)) != std::string_view::npos) {
    auto end = output.find('>', pos);
    if (end == std::string_view::npos) parse_failure(ToolKind::checkstyle, "has an unterminated tag", output.substr(pos));
    auto tag = output.substr(pos + 1, end - pos - 1);
    if (tag.starts_with("file ") || tag.starts_with("file\t")) {
      current_file = xml_attrs(tag)["name"];
    } else if (tag.starts_with("error ") || tag.starts_with("error\t")) {
      auto a = xml_attrs(tag);
      NativeFinding f;
      f.file = current_file;
      const auto source = a["source"];
      auto cls = source.substr(source.rfind('.') == std::string::npos ? 0 : source.rfind('.') + 1);
      auto shortname = cls.size() > 5 && cls.ends_with("Check") ? cls.substr(0, cls.size() - 5) : cls;
      f.names = {shortname.empty() ? std::string("checkstyle") : shortname};
      if (cls != shortname) f.names.push_back(cls);
      if (!source.empty() && source != cls) f.names.push_back(source);
      f.message = a["message"];
      try {
        f.line = a.contains("line") ? std::max(1, std::stoi(a["line"])) : 1;
      } catch (const std::exception&) {
        f.line = 1;
      }
      f.end_line = f.line;
      f.native_error = a["severity"] == "error";
      out.push_back(std::move(f));
    } else if (tag == "exception") {
      // Checker exceptions (parse failures) carry their text in CDATA.
      auto close = output.find("</exception>", end);
      auto body = output.substr(end + 1, close == std::string_view::npos ? std::string_view::npos : close - end - 1);
      auto cdata = body.find("<![CDATA[");
      if (cdata != std::string_view::npos) {
        body = body.substr(cdata + 9);
        body = body.substr(0, body.find("]]>"));
      }
      NativeFinding f;
      f.file = current_file;
      f.names = {"Checker", "com.puppycrawl.tools.checkstyle.Checker"};
      f.message = std::string(text::trim(body.substr(0, body.find('\n'))));
      f.native_error = true;
      out.push_back(std::move(f));
      if (close != std::string_view::npos) end = close + 11;
    }
    pos = end + 1;
  }
  return out;
}

bool skippable_compiler_line(const std::string& line) {
  static const std::regex summary(
      R"re(^\s*(\d+ (warnings?|errors?)( and \d+ (warnings?|errors?))? generated\.?|\d+ (errors?|warnings?)|Suppressed \d+ warnings.*|Use -header-filter=.*|Error while processing .*|Found compiler errors?.*|In file included from .*|\s+from .*:\d+[,:]|Note: .*)\s*$)re");
  return std::regex_match(line, summary);
}

std::vector<NativeFinding> parse_compiler_text(std::string_view output, ToolKind tool) {
  static const std::regex header(
      R"re(^(.+?):(\d+):(?:(\d+):)?\s*(fatal error|error|warning|note|remark):\s?(.*)$)re");
  static const std::regex check_suffix(R"re(^(.*?)\s*\[([A-Za-z0-9_.,+\-]+)\]$)re");

  std::vector<NativeFinding> out;
  NativeFinding* current = nullptr;
  bool in_note = false;
  for (const auto& line : text::split_lines(output)) {
    std::smatch m;
    if (std::regex_match(line, m, header)) {
      const auto level = m[4].str();
      if (level == "note" || level == "remark") {
        current = nullptr;
        in_note = true;
        continue;
      }
      in_note = false;
      NativeFinding f;
      f.file = m[1].str();
      f.line = std::max(1, std::stoi(m[2].str().substr(0, 9)));
      f.end_line = f.line;
      f.native_error = level != "warning";
      std::string message = m[5].str();
      std::smatch cm;
      if (std::regex_match(message, cm, check_suffix)) {
        auto checks = cm[2].str();
        message = cm[1].str();
        for (std::size_t p = 0; p <= checks.size();) {
          auto comma = checks.find(',', p);
          if (comma == std::string::npos) comma = checks.size();
          if (comma > p) f.names.push_back(checks.substr(p, comma - p));
          p = comma + 1;
        }
      }
      f.names.push_back(level == "fatal error" ? "error" : level);
      f.message = message;
      out.push_back(std::move(f));
      current = &out.back();
      continue;
    }
    if (skippable_compiler_line(line)) {
      current = nullptr;
      continue;
    }
    if (current) {
      current->message += "\n" + std::string(text::rtrim(line));
    } else if (!in_note && !text::trim(line).empty()) {
      parse_failure(tool, "has an unrecognized line", line);
    }
  }
  return out;
}

}  // namespace

std::vector<NativeFinding> parse_native_output(std::string_view output, ToolKind tool) {
  switch (tool) {
    case ToolKind::pylint:
      if (text::trim(output).empty()) return {};
      return parse_pylint(output);
    case ToolKind::eslint:
      if (text::trim(output).empty()) return {};
      return parse_eslint(output);
    case ToolKind::sqlfluff:
      if (text::trim(output).empty()) return {};
      return parse_sqlfluff(output);
    case ToolKind::checkstyle: return parse_checkstyle(output);
    case ToolKind::javac:
    case ToolKind::clang_tidy: return parse_compiler_text(output, tool);
  }
  return {};
}

bool same_file(std::string_view reported, std::string_view block_file) noexcept {
  if (block_file.empty() || reported == block_file) return true;
  auto suffix_of = [](std::string_view longer, std::string_view shorter) {
    return longer.size() > shorter.size() && longer.ends_with(shorter) &&
           longer[longer.size() - shorter.size() - 1] == '/';
  };
  return suffix_of(reported, block_file) || suffix_of(block_file, reported);
}

std::vector<LintIssue> to_issues(const std::vector<NativeFinding>& findings, ToolKind tool, const RuleConfig& config,
                                 const NormalizeContext& ctx) {
  std::vector<LintIssue> issues;
  const auto language = std::string(display_name(ctx.language));
  for (const auto& f : findings) {
    const auto tier = config.tier_for(tool, f.names, f.native_error);
    if (tier == Tier::disabled) continue;
    LintIssue issue;
    issue.rule_name = f.names.empty() ? std::string("unknown") : f.names.front();
    issue.message = f.message;
    issue.severity = tier == Tier::error ? Severity::error : Severity::info;
    issue.language = language;
    const int start = std::max(1, f.line);
    const int end = std::max(start, f.end_line);
    if (same_file(f.file, ctx.block_file)) {
      std::vector<std::string> span;
      for (int l = start; l <= end && l <= static_cast<int>(ctx.block_lines.size()); ++l) {
        span.push_back(ctx.block_lines[static_cast<std::size_t>(l - 1)]);
      }
      issue.content = text::join(span, "\n");
      issue.position = {start + ctx.line_offset, end + ctx.line_offset};
    } else {
      issue.file_path = f.file;
      issue.position = {start, end};
    }
    issues.push_back(std::move(issue));
  }
  return issues;
}

std::vector<LintIssue> normalize_native_output(std::string_view output, ToolKind tool, const RuleConfig& config,
                                               const NormalizeContext& ctx) {
  return to_issues(parse_native_output(output, tool), tool, config, ctx);
}

}  // namespace instforge
