#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "instforge/error.hpp"
#include "instforge/jsonl.hpp"

namespace instforge {

enum class Mode { live, record, replay };

std::string_view to_string(Mode mode) noexcept;
/// Throws InvalidArgument.
Mode parse_mode(std::string_view name);

struct CompletionRequest {
  std::string prompt;
  std::string model;
  double temperature = 0.7;
  int max_tokens = 2048;
  /// Distinguishes repeated samples of an otherwise identical request.
  int sample_index = 0;

  /// Pure function of the fields above.
  std::string digest() const;
};

struct CompletionResult {
  std::string text;
  std::int64_t latency_ms = 0;
  int attempt_count = 1;
};

/// One HTTP exchange. status 0 means the request never got a response
/// (connect failure, timeout).
struct TransportResponse {
  int status = 0;
  std::string body;
  std::string error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  /// `payload` is the chat-completion request body.
  virtual TransportResponse post(const std::string& payload) = 0;
};

/// Recorded completions keyed by request digest, backed by a JSONL file of
/// {request_digest, model, temperature, sample_index, text}.
class Cassette {
 public:
  /// Missing file starts an empty cassette. `writable` opens it for append.
  explicit Cassette(std::filesystem::path path, bool writable = false);
  ~Cassette();

  std::optional<std::string> lookup(const std::string& digest) const;
  /// First write for a digest wins; later writes for it are ignored.
  void store(const CompletionRequest& req, const std::string& text);
  std::size_t size() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::string, std::less<>> entries_;
  std::unique_ptr<JsonlAppender> appender_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{30000};
};

struct GatewayOptions {
  RetryPolicy retry;
  /// Replaced in tests to avoid real waits.
  std::function<void(std::chrono::milliseconds)> sleeper;
};

class Gateway {
 public:
  Gateway(GatewayOptions options, std::shared_ptr<Transport> transport, std::shared_ptr<Cassette> cassette);

  /// replay never touches the transport. Throws Transport, RateLimited,
  /// CassetteMiss, MalformedResponse.
  CompletionResult complete(const CompletionRequest& req, Mode mode) const;

  /// Results are index-aligned with `reqs`; per-item failures are carried,
  /// never thrown. Throws InvalidArgument when parallelism < 1.
  std::vector<Outcome<CompletionResult>> batch_complete(const std::vector<CompletionRequest>& reqs,
                                                        int parallelism, Mode mode) const;

  /// OpenAI-style chat body for `req`.
  static std::string request_body(const CompletionRequest& req);
  /// choices[0].message.content; throws MalformedResponse.
  static std::string extract_text(const std::string& body);

 private:
  CompletionResult call_live(const CompletionRequest& req) const;

  GatewayOptions options_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<Cassette> cassette_;
};

}  // namespace instforge
