#include "instforge/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "instforge/error.hpp"
#include "instforge/rng.hpp"
#include "instforge/text.hpp"

namespace instforge {

namespace {

std::string require_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw Error(ErrorCode::ParseFailure, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

}  // namespace

CorpusLoad load_corpus(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  CorpusLoad result;
  for (auto& line : read_jsonl(path)) {
    if (!line.value) {
      result.rejects.push_back({line.line_no, "malformed JSON: " + line.error, excerpt(line.raw)});
      continue;
    }
    try {
      if (!line.value->is_object()) throw Error(ErrorCode::ParseFailure, "record is not an object");
      CorpusDocument doc;
      doc.source_id = require_string(*line.value, "source_id");
      doc.language = normalize_language(require_string(*line.value, "language"));
      doc.text = require_string(*line.value, "text");
      if (doc.text.empty()) throw Error(ErrorCode::ParseFailure, "empty text");
      result.documents.push_back(std::move(doc));
    } catch (const Error& e) {
      result.rejects.push_back({line.line_no, e.detail(), excerpt(line.raw)});
    }
  }
  if (result.documents.empty()) throw Error(ErrorCode::EmptyCorpus, path.string());
  return result;
}

std::size_t line_count(std::string_view text) noexcept {
  if (text.empty()) return 0;
  // Snippet text is lines joined by '\n' with no terminator, so a trailing
  // '\n' means a final empty line.
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
}

std::vector<CodeSnippet> sample_snippets(const CorpusDocument& doc, std::size_t count, std::uint64_t seed) {
  const auto lines = text::split_lines(doc.text);
  if (lines.size() < kMinSnippetLines) {
    throw Error(ErrorCode::DocumentTooShort,
                doc.source_id + " has " + std::to_string(lines.size()) + " lines");
  }
  const std::size_t max_len = std::min(kMaxSnippetLines, lines.size());
  SeededRng rng(seed);
  std::vector<CodeSnippet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto len = static_cast<std::size_t>(rng.uniform(kMinSnippetLines, max_len));
    const auto start = static_cast<std::size_t>(rng.uniform(0, lines.size() - len));
    std::vector<std::string> window(lines.begin() + static_cast<std::ptrdiff_t>(start),
                                    lines.begin() + static_cast<std::ptrdiff_t>(start + len));
    CodeSnippet s;
    s.line_range = {start + 1, start + len};
    s.id = doc.source_id + "#L" + std::to_string(s.line_range.start) + "-" + std::to_string(s.line_range.end);
    s.language = doc.language;
    s.source_id = doc.source_id;
    s.text = text::join(window, "\n");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CodeSnippet> sample_corpus(std::span<const CorpusDocument> docs, std::size_t count_per_doc,
                                       std::uint64_t seed, std::vector<std::string>* skipped) {
  std::vector<CodeSnippet> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (text::split_lines(docs[i].text).size() < kMinSnippetLines) {
      if (skipped) skipped->push_back(docs[i].source_id);
      continue;
    }
    auto part = sample_snippets(docs[i], count_per_doc, seed ^ static_cast<std::uint64_t>(i));
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

std::string normalized_snippet_text(std::string_view snippet) {
  std::vector<std::string> lines;
  for (const auto& line : text::split_lines(snippet)) lines.emplace_back(text::trim(line));
  return text::join(lines, "\n");
}

std::vector<CodeSnippet> dedup_snippets(std::span<const CodeSnippet> snippets) {
  std::unordered_set<std::string> seen;
  std::vector<CodeSnippet> out;
  for (const auto& s : snippets) {
    if (seen.insert(normalized_snippet_text(s.text)).second) out.push_back(s);
  }
  return out;
}

Json to_json(const CodeSnippet& s) {
  Json j;
  j["id"] = s.id;
  j["source_id"] = s.source_id;
  j["language"] = std::string(to_string(s.language));
  j["text"] = s.text;
  j["line_range"] = Json::array({s.line_range.start, s.line_range.end});
  return j;
}

CodeSnippet snippet_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseFailure, "snippet record is not an object");
  CodeSnippet s;
  s.id = require_string(j, "id");
  s.source_id = require_string(j, "source_id");
  s.language = normalize_language(require_string(j, "language"));
  s.text = require_string(j, "text");
  auto range = j.find("line_range");
  if (range == j.end() || !range->is_array() || range->size() != 2 || !(*range)[0].is_number_unsigned() ||
      !(*range)[1].is_number_unsigned()) {
    throw Error(ErrorCode::ParseFailure, "line_range must be [start, end]");
  }
  s.line_range = {(*range)[0].get<std::size_t>(), (*range)[1].get<std::size_t>()};
  const auto n = line_count(s.text);
  if (n < kMinSnippetLines || n > kMaxSnippetLines) {
    throw Error(ErrorCode::ParseFailure, "snippet must have 5-20 lines, has " + std::to_string(n));
  }
  if (s.line_range.end < s.line_range.start || s.line_range.length() != n) {
    throw Error(ErrorCode::ParseFailure, "line_range does not match snippet length");
  }
  return s;
}

SnippetLoad load_snippets(const std::filesystem::path& path) {
  SnippetLoad result;
  for (auto& line : read_jsonl(path)) {
    if (!line.value) {
      result.rejects.push_back({line.line_no, "malformed JSON: " + line.error, excerpt(line.raw)});
      continue;
    }
    try {
      result.snippets.push_back(snippet_from_json(*line.value));
    } catch (const Error& e) {
      result.rejects.push_back({line.line_no, e.detail(), excerpt(line.raw)});
    }
  }
  return result;
}

}  // namespace instforge
