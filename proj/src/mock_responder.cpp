#include "instforge/mock_responder.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>

#include "instforge/digest.hpp"
#include "instforge/jsonl.hpp"
#include "instforge/language.hpp"
#include "instforge/scoring.hpp"
#include "instforge/text.hpp"

namespace instforge {

namespace {

constexpr std::array<Language, 5> kCodeLanguages = {Language::python, Language::javascript, Language::java,
                                                   Language::c_cpp, Language::sql};

std::uint64_t h(std::string_view s, std::string_view salt = "") {
  return hash64(std::string(salt) + "\x1f" + std::string(s));
}

template <typename T>
const T& pick(const std::vector<T>& v, std::uint64_t hv) {
  return v[hv % v.size()];
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '+' || c == '#'; }

bool contains_phrase(std::string_view hay, std::string_view needle) {
  if (needle.empty()) return false;
  for (std::size_t at = text::ifind(hay, needle); at != std::string_view::npos;
       at = text::ifind(hay, needle, at + 1)) {
    const bool left = at == 0 || !word_char(hay[at - 1]);
    const auto end = at + needle.size();
    const bool right = end >= hay.size() || !word_char(hay[end]);
    if (left && right) return true;
  }
  return false;
}

/// Text after the last occurrence of `marker`.
std::string_view after_last(std::string_view prompt, std::string_view marker) {
  const auto at = prompt.rfind(marker);
  if (at == std::string_view::npos) return {};
  return prompt.substr(at + marker.size());
}

std::string_view fence_tag(Language lang) {
  switch (lang) {
    case Language::python: return "python";
    case Language::javascript: return "javascript";
    case Language::java: return "java";
    case Language::c_cpp: return "cpp";
    case Language::sql: return "sql";
    case Language::other: return "text";
  }
  return "text";
}

/// Earliest fence tag or language name in `s`.
std::optional<Language> mentioned_language(std::string_view s) {
  static const std::regex fence(R"(```([A-Za-z+#]+))");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(s.begin(), s.end(), m, fence)) {
    const auto lang = normalize_language(m[1].str());
    if (lang != Language::other) return lang;
  }
  std::optional<Language> best;
  std::size_t best_at = std::string_view::npos;
  for (auto lang : kCodeLanguages) {
    const auto name = display_name(lang);
    for (std::size_t at = text::ifind(s, name); at != std::string_view::npos; at = text::ifind(s, name, at + 1)) {
      const auto end = at + name.size();
      if ((at == 0 || !word_char(s[at - 1])) && (end >= s.size() || !word_char(s[end]))) {
        if (at < best_at) {
          best_at = at;
          best = lang;
        }
        break;
      }
    }
  }
  return best;
}

/// Language whose marker patterns occur most often in `code`.
Language snippet_language(std::string_view code) {
  static const std::vector<std::pair<Language, std::regex>> markers = {
      {Language::c_cpp, std::regex(R"(#include|std::|template\s*<|->|size_t|\bauto\b|\bfor \(\w+ \w+ :|\.(push|pop|front|empty)\(\))")},
      {Language::java, std::regex(R"(\b(public|private|protected|synchronized|extends|throws)\b|@Override|System\.|throw new|\b(int|long|String|boolean)\s+\w+\s*[=;,)])")},
      {Language::sql, std::regex(R"(\b(SELECT|FROM|WHERE|GROUP BY|ORDER BY|CREATE TABLE|CREATE INDEX|INSERT INTO|UPDATE|JOIN|HAVING|VARCHAR|INTEGER|DEFAULT)\b)")},
      {Language::javascript, std::regex(R"(\b(function|const|let|async|await)\b|=>|===)")},
      {Language::python, std::regex(R"(\b(def|elif|self|import|None|True|False)\b|:\n)")},
  };
  Language best = Language::python;
  std::ptrdiff_t best_count = 0;
  for (const auto& [lang, re] : markers) {
    const auto n = std::distance(std::regex_iterator<std::string_view::const_iterator>(code.begin(), code.end(), re),
                                 std::regex_iterator<std::string_view::const_iterator>());
    if (n > best_count) {
      best = lang;
      best_count = n;
    }
  }
  return best;
}

struct Domain {
  const char* coll;
  const char* key;
  const char* val;
};

constexpr std::array<Domain, 3> kDomains = {{{"orders", "product", "quantity"},
                                             {"events", "category", "hits"},
                                             {"scores", "player", "points"}}};

std::string fill(std::string tpl, const Domain& d) {
  tpl = text::replace_all(std::move(tpl), "{coll}", d.coll);
  tpl = text::replace_all(std::move(tpl), "{key}", d.key);
  return text::replace_all(std::move(tpl), "{val}", d.val);
}

std::string code_sample(Language lang, const Domain& d, bool broken) {
  switch (lang) {
    case Language::python:
      return fill(std::string(broken ? "def summarize_{coll}({coll})\n" : "def summarize_{coll}({coll}):\n") +
                      "    \"\"\"Return the total {val} per {key}.\"\"\"\n"
                      "    totals = {}\n"
                      "    for {key}, {val} in {coll}:\n"
                      "        totals[{key}] = totals.get({key}, 0) + {val}\n"
                      "    return totals\n"
                      "\n"
                      "\n"
                      "if __name__ == \"__main__\":\n"
                      "    print(summarize_{coll}([(\"a\", 2), (\"b\", 1), (\"a\", 3)]))",
                  d);
    case Language::javascript:
      return fill(std::string("function summarize(items) {\n"
                              "  const totals = new Map();\n"
                              "  for (const [{key}, {val}] of items) {\n"
                              "    totals.set({key}, (totals.get({key}) || 0) + {val});\n") +
                      (broken ? "" : "  }\n") +
                      "  return totals;\n"
                      "}\n"
                      "\n"
                      "console.log(summarize([[\"a\", 2], [\"b\", 1], [\"a\", 3]]));",
                  d);
    case Language::java:
      return fill(std::string("import java.util.Map;\n"
                              "import java.util.TreeMap;\n"
                              "\n"
                              "public class Summary {\n"
                              "    public static Map<String, Integer> summarize(String[] keys, int[] values) {\n"
                              "        Map<String, Integer> totals = new TreeMap<>();\n"
                              "        for (int i = 0; i < keys.length; i++) {\n"
                              "            totals.merge(keys[i], values[i], Integer::sum);\n") +
                      (broken ? "" : "        }\n") +
                      "        return totals;\n"
                      "    }\n"
                      "\n"
                      "    public static void main(String[] args) {\n"
                      "        System.out.println(summarize(new String[] {\"a\", \"b\", \"a\"}, new int[] {2, 1, 3}));\n"
                      "    }\n"
                      "}",
                  d);
    case Language::c_cpp:
      return fill(std::string("#include <iostream>\n"
                              "#include <map>\n"
                              "#include <string>\n"
                              "#include <utility>\n"
                              "#include <vector>\n"
                              "\n"
                              "std::map<std::string, int> summarize(const std::vector<std::pair<std::string, int>>& "
                              "items) {\n") +
                      (broken ? "  std::map<std::string, int> totals\n" : "  std::map<std::string, int> totals;\n") +
                      "  for (const auto& [{key}, {val}] : items) {\n"
                      "    totals[{key}] += {val};\n"
                      "  }\n"
                      "  return totals;\n"
                      "}\n"
                      "\n"
                      "int main() {\n"
                      "  for (const auto& [{key}, {val}] : summarize({{\"a\", 2}, {\"b\", 1}, {\"a\", 3}})) {\n"
                      "    std::cout << {key} << \": \" << {val} << '\\n';\n"
                      "  }\n"
                      "  return 0;\n"
                      "}",
                  d);
    case Language::sql:
      return fill(broken ? "SELECT {key}, SUM({val} AS total_{val}\nFROM {coll}\nGROUP BY {key};"
                         : "SELECT\n    {key},\n    SUM({val}) AS total_{val}\nFROM {coll}\nGROUP BY {key}\n"
                           "ORDER BY total_{val} DESC;",
                  d);
    case Language::other: break;
  }
  return "";
}

std::string fenced(Language lang, std::string_view code) {
  return "```" + std::string(fence_tag(lang)) + "\n" + std::string(code) + "\n```";
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(text::read_file(p))) {
    auto t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

bool is_language_name(std::string_view word) {
  return std::any_of(kCodeLanguages.begin(), kCodeLanguages.end(),
                     [&](Language l) { return text::iequals(display_name(l), word); });
}

std::optional<ProblemType> type_between(std::string_view prompt, std::string_view before, std::string_view after) {
  const auto a = prompt.find(before);
  if (a == std::string_view::npos) return std::nullopt;
  const auto start = a + before.size();
  const auto b = prompt.find(after, start);
  if (b == std::string_view::npos) return std::nullopt;
  try {
    return parse_problem_type(text::trim(prompt.substr(start, b - start)));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string question_text(ProblemType type, Language lang, const std::string& task, const std::string& i1,
                          const std::string& i2, const std::string& kp, const Domain& d) {
  const std::string name(display_name(lang));
  const auto code = fenced(lang, code_sample(lang, d, false));
  switch (type) {
    case ProblemType::CodeGeneration:
      return "Write a " + name + " program to " + task + " for a small shop. The solution should " + i1 + " and " +
             i2 + ". Rely on " + kp + " where it keeps the design simple.";
    case ProblemType::CodeUnderstanding:
      return "The following " + name + " code is part of an effort to " + task + ". Explain what it computes, how " +
             kp + " is involved, and what you would change to " + i1 + ".\n\n" + code;
    case ProblemType::KnowledgeQuestion:
      return "Explain how " + kp + " helps when you " + task + " in " + name + ". Describe how a team should " + i1 +
             " and why it matters to " + i2 + ".";
    case ProblemType::CodeCompletion:
      return "Complete the following " + name + " code so that it can " + task + ". Make sure to " + i1 +
             " and use " + kp + ".\n\n" + code;
    case ProblemType::CodeOptimization:
      return "The following " + name + " code is used to " + task + " but is slow on large inputs. Optimize it with " +
             kp + " and " + i1 + ".\n\n" + code;
    case ProblemType::Debug:
      return "The following " + name + " code should " + task + " but produces wrong totals for repeated keys. Find " +
             "and fix the bug, then " + i1 + ". Consider " + kp + ".\n\n" + code;
    case ProblemType::ModifyCode:
      return "Modify the following " + name + " code so that it can also " + task + ". You must " + i1 +
             " and use " + kp + ".\n\n" + code;
  }
  return "";
}

/// Prose before the first fence, and the fenced remainder.
std::pair<std::string, std::string> split_code(std::string_view s) {
  const auto at = s.find("```");
  if (at == std::string_view::npos) return {std::string(text::trim(s)), ""};
  return {std::string(text::trim(s.substr(0, at))), std::string(text::trim(s.substr(at)))};
}

std::string indent(std::string_view s, std::string_view pad) {
  std::string out;
  for (const auto& line : text::split_lines(s)) {
    if (!out.empty()) out += "\n";
    if (!line.empty()) out += std::string(pad) + line;
  }
  return out;
}

}  // namespace

MockVocabulary MockVocabulary::load(const std::filesystem::path& tasks, const std::filesystem::path& instructions,
                                    const std::filesystem::path& knowledge) {
  return {read_lines(tasks), read_lines(instructions), read_lines(knowledge)};
}

MockVocabulary MockVocabulary::builtin() {
  return {{"build inventory tracker", "implement rate limiter", "parse log files", "aggregate sales report"},
          {"handle invalid input", "write unit tests", "log errors", "keep functions small"},
          {"hash map", "recursion", "binary search", "exception handling", "Python", "JavaScript", "SQL", "C++",
           "Java"}};
}

MockResponder::MockResponder(MockVocabulary vocab)
    : vocab_(std::move(vocab)),
      extras_{"limit memory usage", "process streaming input", "reject duplicate entries", "report progress",
              "support configurable thresholds", "remain thread safe"} {
  if (vocab_.tasks.empty() || vocab_.instructions.empty() || vocab_.knowledge.empty()) {
    throw Error(ErrorCode::InvalidArgument, "mock vocabulary needs tasks, instructions and knowledge points");
  }
}

std::optional<TemplateId> MockResponder::detect(std::string_view p) {
  const auto has = [&](std::string_view s) { return p.find(s) != std::string_view::npos; };
  if (has("# Input Random Code Snippet")) return TemplateId::reverse_question;
  if (has("act as a prompt complexity expert")) return TemplateId::complicate;
  if (has("You are a text rewriting expert")) return TemplateId::text_rewrite;
  if (has("extract the [Task] keywords")) return TemplateId::extract_task;
  if (has("extract the [Instruction] keywords")) return TemplateId::extract_instruction;
  if (has("extract the [Knowledge Points] keywords")) return TemplateId::extract_knowledge;
  if (has("structure it into `Node` objects")) return TemplateId::kg_nodes;
  if (has("Build relationship object triples")) return TemplateId::kg_relations;
  if (has("Extract reasonable word combinations")) return TemplateId::kg_phrases;
  if (has("create a high-quality question based on keywords")) return TemplateId::backfeed_question;
  if (has("evaluate how input prompts enhance")) return TemplateId::quality_filter;
  if (has("evaluating the difficulty of programming questions")) return TemplateId::complexity_assess;
  return std::nullopt;
}

bool MockResponder::answer_is_broken(std::string_view prompt) { return h(prompt, "broken") % 8 == 0; }

std::string MockResponder::respond(std::string_view prompt) {
  const auto id = detect(prompt);
  if (!id) return answer(prompt);
  switch (*id) {
    case TemplateId::reverse_question: return reverse(prompt);
    case TemplateId::complicate: return complicate(prompt);
    case TemplateId::text_rewrite: return rewrite(prompt);
    case TemplateId::extract_task:
    case TemplateId::extract_instruction:
    case TemplateId::extract_knowledge: return extract(prompt, *id);
    case TemplateId::kg_nodes: return kg_nodes(prompt);
    case TemplateId::kg_relations: return kg_relations(prompt);
    case TemplateId::kg_phrases: return kg_phrases(prompt);
    case TemplateId::backfeed_question: return backfeed(prompt);
    case TemplateId::quality_filter: {
      int sample = 0;
      {
        std::lock_guard lock(mutex_);
        sample = calls_[sha256_hex(prompt)]++;
      }
      return quality(prompt, sample);
    }
    case TemplateId::complexity_assess: return complexity(prompt);
  }
  return answer(prompt);
}

MockResponder::Kind MockResponder::classify(std::string_view keyword) const {
  const auto in = [&](const std::vector<std::string>& v) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& e) { return text::iequals(e, keyword); });
  };
  if (in(vocab_.tasks)) return Kind::task;
  if (in(vocab_.instructions) || in(extras_)) return Kind::instruction;
  if (in(vocab_.knowledge) || is_language_name(keyword)) return Kind::knowledge;
  return Kind::unknown;
}

std::string MockResponder::reverse(std::string_view prompt) const {
  const auto snippet = after_last(prompt, "# Input Random Code Snippet\n");
  const auto type = type_between(prompt, "design a high-quality ", " programming problem")
                        .value_or(ProblemType::CodeGeneration);
  const auto lang = snippet_language(snippet);
  const auto hv = h(snippet, "reverse");
  std::vector<std::string> concepts;
  for (const auto& k : vocab_.knowledge) {
    if (!is_language_name(k)) concepts.push_back(k);
  }
  if (concepts.empty()) concepts = vocab_.knowledge;
  const auto& task = pick(vocab_.tasks, hv);
  const auto& i1 = pick(vocab_.instructions, hv >> 8);
  auto i2 = pick(vocab_.instructions, (hv >> 16) + 1);
  if (i2 == i1) i2 = vocab_.instructions[(hv % vocab_.instructions.size() + 1) % vocab_.instructions.size()];
  const auto& kp = pick(concepts, hv >> 24);
  const auto& domain = kDomains[(hv >> 32) % kDomains.size()];
  const auto name = std::string(display_name(lang));
  return "1. Code Snippet Feature Analysis: The snippet is written in " + name +
         " and accumulates values in a loop.\n"
         "2. Inspiration Brainstorming: A realistic scenario is to " + task + ".\n"
         "3. Initial Problem Design: Ask for a " + std::string(display_name(type)) + " exercise built on that scenario.\n"
         "4. Problem Review and Optimization: The draft does not reuse the snippet verbatim.\n"
         "5. Problem Improvement and Revision: Tightened the wording.\n"
         "6. Formal Problem Output:\n"
         "[Programming Language]: " + name + "\n"
         "[Problem Description]: " + question_text(type, lang, task, i1, i2, kp, domain) + "\n";
}

std::string MockResponder::complicate(std::string_view prompt) const {
  const auto given = text::trim(after_last(prompt, "# Given Prompt\n"));
  auto method_text = after_last(prompt, "# Complexity Method to Apply\n");
  const auto method = std::string(text::trim(method_text.substr(0, method_text.find('\n'))));
  const auto& extra = extras_[h(given, "complicate") % extras_.size()];
  auto [prose, code] = split_code(given);
  std::string addition;
  if (method.find("Deepening") != std::string::npos) {
    addition = "Explain the trade-offs of your approach and make sure it can " + extra + ".";
  } else if (method.find("Reasoning") != std::string::npos) {
    addition = "Justify each step of the solution and show that it can " + extra + ".";
  } else {
    addition = "The solution must also " + extra + ".";
  }
  prose += " " + addition;
  return "1. Understanding Given Prompt: The prompt asks for a focused programming task.\n"
         "2. Code Block Extraction: " + std::string(code.empty() ? "No code blocks." : "One code block extracted.") +
         "\n3. Selected Method: " + method +
         "\n4. Selection Rationale: It raises the difficulty without changing the topic.\n"
         "5. Complexity Results:\n"
         "   - Prompt Section:\n" + indent(prose, "     ") + "\n"
         "   - Code Section:\n" + (code.empty() ? std::string("     None") : indent(code, "     ")) + "\n"
         "   - Completeness Verification: All code blocks are preserved unchanged.\n";
}

std::string MockResponder::rewrite(std::string_view prompt) const {
  const auto question = text::trim(after_last(prompt, "# Original Question\n"));
  auto [prose, code] = split_code(question);
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < prose.size(); ++i) {
    if (prose[i] == '.' && prose[i + 1] == ' ') {
      sentences.push_back(prose.substr(start, i + 1 - start));
      start = i + 2;
    }
  }
  sentences.push_back(prose.substr(start));
  std::string out;
  if (sentences.size() > 1) {
    std::rotate(sentences.begin(), sentences.begin() + 1, sentences.end());
    out = text::join(sentences, " ");
  } else {
    out = "Task: " + prose;
  }
  if (!code.empty()) out += "\n\n" + code;
  return "Rewritten Question:\n" + out + "\n";
}

std::string MockResponder::extract(std::string_view prompt, TemplateId id) const {
  auto problem = text::trim(after_last(prompt, "# Input\n"));
  if (problem.starts_with("{") && problem.ends_with("}")) problem = problem.substr(1, problem.size() - 2);
  std::vector<std::string> found;
  std::string header;
  const auto collect = [&](const std::vector<std::string>& words) {
    for (const auto& w : words) {
      if (contains_phrase(problem, w) && std::find(found.begin(), found.end(), w) == found.end()) found.push_back(w);
    }
  };
  if (id == TemplateId::extract_task) {
    header = "[Task]";
    collect(vocab_.tasks);
  } else if (id == TemplateId::extract_instruction) {
    header = "[Instructions]";
    collect(vocab_.instructions);
    collect(extras_);
  } else {
    header = "[Knowledge Points]";
    collect(vocab_.knowledge);
    for (auto lang : kCodeLanguages) {
      std::vector<std::string> name{std::string(display_name(lang))};
      collect(name);
    }
  }
  std::string list;
  for (const auto& w : found) list += (list.empty() ? "[" : ", [") + w + "]";
  return "Analysis: The problem was read for " + header + " keywords.\nOutput:\n" + header + ":" +
         (list.empty() ? "[]" : list) + "\n";
}

std::string MockResponder::kg_nodes(std::string_view prompt) const {
  const auto input = after_last(prompt, "**Input**:\n");
  static const std::regex bracket(R"(\[([^\]\n]+)\])");
  std::string out;
  for (std::regex_iterator<std::string_view::const_iterator> it(input.begin(), input.end(), bracket), end;
       it != end; ++it) {
    const auto word = std::string(text::trim((*it)[1].str()));
    const char* type = "knowledge point";
    switch (classify(word)) {
      case Kind::task: type = "task"; break;
      case Kind::instruction: type = "instruction"; break;
      default: break;
    }
    out += "Node(id=\"" + word + "\", type=\"" + type + "\")\n";
  }
  return out;
}

std::string MockResponder::kg_relations(std::string_view prompt) const {
  const auto input = after_last(prompt, "Node:\n");
  static const std::regex node(R"re(Node\(id="([^"]+)",\s*type=['"]([^'"]+)['"]\))re");
  std::vector<std::string> tasks, instructions, knowledge;
  for (std::regex_iterator<std::string_view::const_iterator> it(input.begin(), input.end(), node), end; it != end;
       ++it) {
    const auto type = text::to_lower((*it)[2].str());
    auto id = (*it)[1].str();
    (type == "task" ? tasks : type == "instruction" ? instructions : knowledge).push_back(std::move(id));
  }
  const auto related = [](const std::string& a, const std::string& b) {
    return h(text::to_lower(a) + "|" + text::to_lower(b), "related") % 4 != 0;
  };
  std::string out;
  for (const auto& t : tasks) {
    const bool isolated = h(text::to_lower(t) + "|" + std::string(input), "isolated") % 6 == 0;
    for (const auto& i : instructions) {
      out += t + (!isolated && related(t, i) ? " requires " : " unrelated ") + i + "\n";
    }
    for (const auto& k : knowledge) {
      out += t + (!isolated && related(t, k) ? " contains " : " unrelated ") + k + "\n";
    }
  }
  for (const auto& i : instructions) {
    for (const auto& k : knowledge) {
      if (related(i, k)) out += i + " displays " + k + "\n";
    }
  }
  return out;
}

std::string MockResponder::kg_phrases(std::string_view prompt) const {
  const auto input = after_last(prompt, "# Input\n");
  std::vector<std::string> words;
  static const std::regex rel(R"(^(.+?) (requires|contains|displays) (.+)$)");
  for (const auto& raw : text::split_lines(input)) {
    std::smatch m;
    const std::string line(text::trim(raw));
    if (!std::regex_match(line, m, rel)) continue;
    for (const auto& w : {m[1].str(), m[3].str()}) {
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
  }
  if (words.empty()) return "Expected output:\nNo relevance\n";
  return "Expected output:\n" + text::join(words, ", ") + "\n";
}

std::string MockResponder::backfeed(std::string_view prompt) const {
  const auto input = text::trim(after_last(prompt, "# Keywords\n"));
  const auto type = type_between(prompt, "designing ", " programming questions").value_or(ProblemType::CodeGeneration);
  std::vector<std::string> tasks, instructions, knowledge;
  std::optional<Language> lang;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    auto comma = input.find(", ", pos);
    if (comma == std::string_view::npos) comma = input.size();
    const std::string word(text::trim(input.substr(pos, comma - pos)));
    pos = comma + 2;
    if (word.empty()) continue;
    if (is_language_name(word)) {
      if (!lang) lang = normalize_language(text::to_lower(word));
      continue;
    }
    switch (classify(word)) {
      case Kind::task: tasks.push_back(word); break;
      case Kind::instruction: instructions.push_back(word); break;
      default: knowledge.push_back(word); break;
    }
  }
  const auto hv = h(input, "backfeed");
  if (!lang) lang = kCodeLanguages[hv % kCodeLanguages.size()];
  const std::string task = tasks.empty() ? pick(vocab_.tasks, hv) : tasks.front();
  const std::string i1 = instructions.empty() ? pick(vocab_.instructions, hv >> 8) : instructions.front();
  const std::string i2 = instructions.size() > 1 ? instructions[1] : i1;
  const std::string kp = knowledge.empty() ? std::string(display_name(*lang)) : text::join(knowledge, " and ");
  const auto question = question_text(type, *lang, task, i1, i2, kp, kDomains[(hv >> 16) % kDomains.size()]);
  return "1. Consider logical relationships between keywords: The task ties the remaining keywords together.\n"
         "2. Understand question characteristics: A " + std::string(display_name(type)) +
         " question needs a concrete goal.\n"
         "3. Consider how to organize keywords into questions: Use the task as the scenario.\n"
         "4. Output initial question: A first draft was written.\n"
         "5. Review initial question: The draft hinted at the answer.\n"
         "6. Propose new question: Removed the hint.\n"
         "7. Repeat above steps: No further issues.\n"
         "8. Final question output: " + question + "\n";
}

std::string MockResponder::quality(std::string_view prompt, int sample) const {
  const auto input = text::trim(after_last(prompt, "# Input Prompt\n"));
  static constexpr std::array<int, 10> kBase = {4, 5, 6, 6, 6, 7, 7, 7, 7, 6};
  static constexpr std::array<int, 3> kJitter = {0, -1, 1};
  const auto hv = h(input, "quality");
  const int met = std::clamp(kBase[hv % kBase.size()] + kJitter[static_cast<std::size_t>(sample) % 3], 0, kCriteriaCount);
  std::vector<int> order{1, 2, 3, 4, 5, 6, 7};
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[(hv >> (i * 4)) % (i + 1)]);
  std::vector<int> chosen(order.begin(), order.begin() + met);
  std::sort(chosen.begin(), chosen.end());
  std::string list;
  for (int c : chosen) list += (list.empty() ? "" : ", ") + std::to_string(c);
  return "Evaluation Process: Each criterion was checked against the prompt in turn.\nStandards Met: [" + list + "]\n";
}

std::string MockResponder::complexity(std::string_view prompt) const {
  const auto question = text::trim(after_last(prompt, "# Question\n"));
  const auto hv = h(question, "complexity");
  std::string out =
      "Thinking Steps: Identify the required concepts and the amount of design work.\n"
      "Analysis: The question combines routine coding with some design decisions.\n";
  if (hv % 29 == 0) return out + "No score could be assigned.\n";
  return out + "Json Output:\n```json\n{\"score\": " + std::to_string(2 + hv % 8) + "}\n```\n";
}

std::string MockResponder::answer(std::string_view prompt) const {
  const auto lang = mentioned_language(prompt).value_or(Language::python);
  const auto hv = h(prompt, "answer");
  const bool prose_only = prompt.find("```") == std::string_view::npos && text::trim(prompt).starts_with("Explain");
  if (prose_only) {
    return "The idea is to keep each piece of state in one place and make every transformation explicit.\n\n"
           "In " + std::string(display_name(lang)) +
           " this usually means small functions with clear inputs and outputs, validated at the boundary.\n";
  }
  const auto& domain = kDomains[hv % kDomains.size()];
  return "Here is a " + std::string(display_name(lang)) + " solution.\n\n" +
         fenced(lang, code_sample(lang, domain, answer_is_broken(prompt))) +
         "\n\nThe totals are accumulated in a single pass over the input.\n";
}

TransportResponse MockTransport::post(const std::string& payload) {
  try {
    const auto j = Json::parse(payload);
    const auto& prompt = j.at("messages").at(0).at("content").get_ref<const std::string&>();
    return {200, completion_body(responder_.respond(prompt)), ""};
  } catch (const std::exception& e) {
    return {400, R"({"error":"bad request"})", e.what()};
  }
}

std::string MockTransport::completion_body(std::string_view text) {
  Json body;
  body["object"] = "chat.completion";
  body["choices"] = Json::array({Json{{"index", 0},
                                      {"message", {{"role", "assistant"}, {"content", text}}},
                                      {"finish_reason", "stop"}}});
  return body.dump();
}

}  // namespace instforge
