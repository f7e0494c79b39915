#include "instforge/gateway.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "instforge/digest.hpp"
#include "instforge/rng.hpp"
#include "instforge/text.hpp"

namespace instforge {

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::live: return "live";
    case Mode::record: return "record";
    case Mode::replay: return "replay";
  }
  return "replay";
}

Mode parse_mode(std::string_view name) {
  for (auto m : {Mode::live, Mode::record, Mode::replay}) {
    if (text::iequals(name, to_string(m))) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

std::string CompletionRequest::digest() const {
  nlohmann::json j;
  j["prompt"] = prompt;
  j["model"] = model;
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["sample_index"] = sample_index;
  return canonical_digest(j);
}

Cassette::Cassette(std::filesystem::path path, bool writable) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    for (const auto& line : read_jsonl(path_)) {
      if (!line.value || !line.value->is_object()) {
        throw Error(ErrorCode::IoError, path_.string() + ":" + std::to_string(line.line_no) + ": malformed cassette entry");
      }
      const auto& v = *line.value;
      if (!v.contains("request_digest") || !v.contains("text")) {
        throw Error(ErrorCode::IoError, path_.string() + ":" + std::to_string(line.line_no) + ": cassette entry lacks fields");
      }
      entries_.emplace(v["request_digest"].get<std::string>(), v["text"].get<std::string>());
    }
  }
  if (writable) appender_ = std::make_unique<JsonlAppender>(path_, false);
}

Cassette::~Cassette() = default;

std::optional<std::string> Cassette::lookup(const std::string& digest) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cassette::store(const CompletionRequest& req, const std::string& text) {
  auto digest = req.digest();
  {
    std::unique_lock lock(mutex_);
    if (!entries_.emplace(digest, text).second) return;
  }
  if (!appender_) throw Error(ErrorCode::IoError, "cassette " + path_.string() + " is read-only");
  Json entry;
  entry["request_digest"] = digest;
  entry["model"] = req.model;
  entry["temperature"] = req.temperature;
  entry["sample_index"] = req.sample_index;
  entry["text"] = text;
  appender_->append(entry);
}

std::size_t Cassette::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

Gateway::Gateway(GatewayOptions options, std::shared_ptr<Transport> transport, std::shared_ptr<Cassette> cassette)
    : options_(std::move(options)), transport_(std::move(transport)), cassette_(std::move(cassette)) {
  if (!options_.sleeper) options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (options_.retry.max_attempts < 1) throw Error(ErrorCode::InvalidArgument, "max_attempts must be >= 1");
}

std::string Gateway::request_body(const CompletionRequest& req) {
  Json body;
  body["model"] = req.model;
  body["messages"] = Json::array({Json{{"role", "user"}, {"content", req.prompt}}});
  body["temperature"] = req.temperature;
  body["max_tokens"] = req.max_tokens;
  return body.dump();
}

std::string Gateway::extract_text(const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedResponse, "body is not JSON: " + excerpt(body));
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw Error(ErrorCode::MalformedResponse, "no choices: " + excerpt(body));
  }
  const auto& choice = j["choices"][0];
  if (!choice.contains("message") || !choice["message"].contains("content") ||
      !choice["message"]["content"].is_string()) {
    throw Error(ErrorCode::MalformedResponse, "no message content: " + excerpt(body));
  }
  return choice["message"]["content"].get<std::string>();
}

CompletionResult Gateway::call_live(const CompletionRequest& req) const {
  if (!transport_) throw Error(ErrorCode::Transport, "no endpoint configured");
  const auto payload = request_body(req);
  const auto started = std::chrono::steady_clock::now();
  SeededRng jitter(hash64(req.digest()));

  bool throttled = false;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
    auto resp = transport_->post(payload);
    if (resp.status >= 200 && resp.status < 300) {
      CompletionResult result;
      result.text = extract_text(resp.body);
      result.attempt_count = attempt;
      result.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - started).count();
      return result;
    }
    throttled = resp.status == 429;
    const bool transient = resp.status == 0 || throttled || resp.status == 408 || resp.status >= 500;
    last_error = resp.status == 0 ? resp.error : "HTTP " + std::to_string(resp.status) + ": " + excerpt(resp.body);
    if (!transient) throw Error(ErrorCode::Transport, last_error);
    if (attempt == options_.retry.max_attempts) break;

    auto delay = options_.retry.base_delay * (1LL << std::min(attempt - 1, 20));
    delay = std::min<std::chrono::milliseconds>(delay, options_.retry.max_delay);
    // Full jitter in [delay/2, delay].
    auto ms = delay.count() / 2 + static_cast<long long>(jitter.unit() * static_cast<double>(delay.count() / 2 + 1));
    options_.sleeper(std::chrono::milliseconds(ms));
  }
  const auto detail = "gave up after " + std::to_string(options_.retry.max_attempts) + " attempts: " + last_error;
  throw Error(throttled ? ErrorCode::RateLimited : ErrorCode::Transport, detail);
}

CompletionResult Gateway::complete(const CompletionRequest& req, Mode mode) const {
  if (mode == Mode::replay) {
    if (!cassette_) throw Error(ErrorCode::CassetteMiss, "no cassette loaded");
    auto hit = cassette_->lookup(req.digest());
    if (!hit) throw Error(ErrorCode::CassetteMiss, req.digest());
    return CompletionResult{*hit, 0, 1};
  }
  auto result = call_live(req);
  if (mode == Mode::record) {
    if (!cassette_) throw Error(ErrorCode::InvalidArgument, "record mode needs a cassette");
    cassette_->store(req, result.text);
  }
  return result;
}

std::vector<Outcome<CompletionResult>> Gateway::batch_complete(const std::vector<CompletionRequest>& reqs,
                                                               int parallelism, Mode mode) const {
  if (parallelism < 1) throw Error(ErrorCode::InvalidArgument, "parallelism must be >= 1");
  std::vector<std::optional<Outcome<CompletionResult>>> slots(reqs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < reqs.size(); i = next++) {
      try {
        slots[i].emplace(complete(reqs[i], mode));
      } catch (const Error& e) {
        slots[i].emplace(e);
      } catch (const std::exception& e) {
        slots[i].emplace(Error(ErrorCode::Transport, e.what()));
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism), reqs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  std::vector<Outcome<CompletionResult>> out;
  out.reserve(reqs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace instforge
