#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instforge/gateway.hpp"
#include "instforge/templates.hpp"

namespace instforge {

/// Offline stand-in for the completion endpoint. Recognizes each shipped
/// template by its fixed wording and answers in the format the matching
/// parser expects; any other prompt gets a plain answer with a fenced code
/// block. Output is a pure function of the prompt, except quality samples,
/// which vary with a per-prompt call counter.
struct MockVocabulary {
  std::vector<std::string> tasks;
  std::vector<std::string> instructions;
  std::vector<std::string> knowledge;

  /// One keyword per line in each file.
  static MockVocabulary load(const std::filesystem::path& tasks, const std::filesystem::path& instructions,
                             const std::filesystem::path& knowledge);
  static MockVocabulary builtin();
};

class MockResponder {
 public:
  explicit MockResponder(MockVocabulary vocab = MockVocabulary::builtin());

  /// Thread-safe.
  std::string respond(std::string_view prompt);

  /// Template whose wording `prompt` carries; nothing for a plain prompt.
  static std::optional<TemplateId> detect(std::string_view prompt);

  /// Roughly one plain answer in eight carries code that fails its analyzer.
  static bool answer_is_broken(std::string_view prompt);

 private:
  std::string reverse(std::string_view prompt) const;
  std::string complicate(std::string_view prompt) const;
  std::string rewrite(std::string_view prompt) const;
  std::string extract(std::string_view prompt, TemplateId id) const;
  std::string kg_nodes(std::string_view prompt) const;
  std::string kg_relations(std::string_view prompt) const;
  std::string kg_phrases(std::string_view prompt) const;
  std::string backfeed(std::string_view prompt) const;
  std::string quality(std::string_view prompt, int sample) const;
  std::string complexity(std::string_view prompt) const;
  std::string answer(std::string_view prompt) const;

  enum class Kind { task, instruction, knowledge, unknown };
  Kind classify(std::string_view keyword) const;

  MockVocabulary vocab_;
  std::vector<std::string> extras_;  // instruction phrases the complicate answer adds
  std::mutex mutex_;
  std::map<std::string, int, std::less<>> calls_;
};

/// Transport that answers chat-completion payloads with a MockResponder.
class MockTransport : public Transport {
 public:
  explicit MockTransport(MockVocabulary vocab = MockVocabulary::builtin()) : responder_(std::move(vocab)) {}
  TransportResponse post(const std::string& payload) override;

  /// Chat-completion response body wrapping `text`.
  static std::string completion_body(std::string_view text);

 private:
  MockResponder responder_;
};

}  // namespace instforge
