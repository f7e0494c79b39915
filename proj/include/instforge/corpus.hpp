#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "instforge/jsonl.hpp"
#include "instforge/language.hpp"

namespace instforge {

inline constexpr std::size_t kMinSnippetLines = 5;
inline constexpr std::size_t kMaxSnippetLines = 20;

struct CorpusDocument {
  std::string source_id;
  Language language = Language::other;
  std::string text;
};

/// Inclusive, 1-based line numbers in the source document.
struct LineRange {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const noexcept { return end - start + 1; }
  friend bool operator==(const LineRange&, const LineRange&) = default;
};

struct CodeSnippet {
  std::string id;
  Language language = Language::other;
  std::string text;
  std::string source_id;
  LineRange line_range;
  friend bool operator==(const CodeSnippet&, const CodeSnippet&) = default;
};

struct InputReject {
  std::size_t line_no = 0;
  std::string reason;
  std::string raw;
};

struct CorpusLoad {
  std::vector<CorpusDocument> documents;
  std::vector<InputReject> rejects;
};

/// Reads line-delimited {source_id, language, text} records in file order.
/// Throws FileNotFound, or EmptyCorpus when no line is valid.
CorpusLoad load_corpus(const std::filesystem::path& path);

/// Lines in snippet text (lines joined by '\n', no terminator).
std::size_t line_count(std::string_view text) noexcept;

/// Draws `count` contiguous windows of uniform length in
/// [5, min(20, lines)] from `doc`. Throws DocumentTooShort below 5 lines.
std::vector<CodeSnippet> sample_snippets(const CorpusDocument& doc, std::size_t count, std::uint64_t seed);

/// Per-document sampling with seed ^ document index; documents that are too
/// short are skipped and reported through `skipped`.
std::vector<CodeSnippet> sample_corpus(std::span<const CorpusDocument> docs, std::size_t count_per_doc,
                                       std::uint64_t seed, std::vector<std::string>* skipped = nullptr);

/// Per-line trimmed text; the dedup key.
std::string normalized_snippet_text(std::string_view text);

/// Keeps the first occurrence of each normalized text, preserving order.
std::vector<CodeSnippet> dedup_snippets(std::span<const CodeSnippet> snippets);

Json to_json(const CodeSnippet& snippet);
CodeSnippet snippet_from_json(const Json& j);

struct SnippetLoad {
  std::vector<CodeSnippet> snippets;
  std::vector<InputReject> rejects;
};
SnippetLoad load_snippets(const std::filesystem::path& path);

}  // namespace instforge
