#include <gtest/gtest.h>

#include <deque>
#include <filesystem>
#include <mutex>

#include "instforge/gateway.hpp"
#include "instforge/text.hpp"

namespace fs = std::filesystem;
using namespace instforge;
using std::chrono::milliseconds;

namespace {

std::string ok_body(const std::string& text) {
  return Json{{"choices", Json::array({Json{{"message", {{"role", "assistant"}, {"content", text}}}}})}}.dump();
}

/// Pops one scripted response per post; echoes the prompt once the script runs out.
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(std::deque<TransportResponse> script = {}) : script_(std::move(script)) {}

  TransportResponse post(const std::string& payload) override {
    std::lock_guard lock(mutex_);
    ++calls;
    payloads.push_back(payload);
    if (!script_.empty()) {
      auto r = script_.front();
      script_.pop_front();
      return r;
    }
    const auto prompt = Json::parse(payload)["messages"][0]["content"].get<std::string>();
    return {200, ok_body("echo:" + prompt), {}};
  }

  int calls = 0;
  std::vector<std::string> payloads;

 private:
  std::mutex mutex_;
  std::deque<TransportResponse> script_;
};

struct Sleeps {
  std::vector<milliseconds> delays;
  GatewayOptions options(int attempts = 5) {
    GatewayOptions o;
    o.retry = {attempts, milliseconds(100), milliseconds(1000)};
    o.sleeper = [this](milliseconds d) { delays.push_back(d); };
    return o;
  }
};

CompletionRequest request(std::string prompt = "hello") {
  CompletionRequest r;
  r.prompt = std::move(prompt);
  r.model = "m";
  return r;
}

fs::path temp_cassette(const std::string& name) {
  auto p = fs::temp_directory_path() / name;
  fs::remove(p);
  return p;
}

}  // namespace

TEST(Gateway, DigestCoversEveryField) {
  const auto base = request();
  auto changed = base;
  EXPECT_EQ(base.digest(), changed.digest());
  changed.sample_index = 1;
  EXPECT_NE(base.digest(), changed.digest());
  changed = base;
  changed.temperature = 0.0;
  EXPECT_NE(base.digest(), changed.digest());
  changed = base;
  changed.max_tokens = 10;
  EXPECT_NE(base.digest(), changed.digest());
  changed = base;
  changed.model = "n";
  EXPECT_NE(base.digest(), changed.digest());
}

TEST(Gateway, RetriesTransientFailuresWithBoundedBackoff) {
  auto transport = std::make_shared<ScriptedTransport>(std::deque<TransportResponse>{
      {0, "", "connection refused"}, {503, "busy", ""}, {429, "slow down", ""}, {200, ok_body("done"), ""}});
  Sleeps sleeps;
  const Gateway gw(sleeps.options(), transport, nullptr);
  const auto r = gw.complete(request(), Mode::live);
  EXPECT_EQ(r.text, "done");
  EXPECT_EQ(r.attempt_count, 4);
  ASSERT_EQ(sleeps.delays.size(), 3u);
  for (std::size_t i = 0; i < sleeps.delays.size(); ++i) {
    const auto nominal = std::min<long long>(100LL << i, 1000);
    EXPECT_GE(sleeps.delays[i].count(), nominal / 2);
    EXPECT_LE(sleeps.delays[i].count(), nominal);
  }
}

TEST(Gateway, GivesUpAfterMaxAttempts) {
  std::deque<TransportResponse> script(10, TransportResponse{429, "slow", ""});
  auto transport = std::make_shared<ScriptedTransport>(script);
  Sleeps sleeps;
  const Gateway gw(sleeps.options(3), transport, nullptr);
  try {
    gw.complete(request(), Mode::live);
    FAIL() << "expected RateLimited";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RateLimited);
  }
  EXPECT_EQ(transport->calls, 3);
  EXPECT_EQ(sleeps.delays.size(), 2u);
}

TEST(Gateway, ClientErrorsAreNotRetried) {
  auto transport = std::make_shared<ScriptedTransport>(std::deque<TransportResponse>{{401, "bad key", ""}});
  Sleeps sleeps;
  const Gateway gw(sleeps.options(), transport, nullptr);
  try {
    gw.complete(request(), Mode::live);
    FAIL() << "expected Transport";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Transport);
  }
  EXPECT_EQ(transport->calls, 1);
  EXPECT_TRUE(sleeps.delays.empty());
}

TEST(Gateway, MalformedBodiesAreReported) {
  auto transport = std::make_shared<ScriptedTransport>(
      std::deque<TransportResponse>{{200, "not json", ""}, {200, "{\"choices\":[]}", ""}});
  Sleeps sleeps;
  const Gateway gw(sleeps.options(), transport, nullptr);
  for (int i = 0; i < 2; ++i) {
    try {
      gw.complete(request(), Mode::live);
      FAIL() << "expected MalformedResponse";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedResponse);
    }
  }
}

TEST(Gateway, RequestBodyIsChatCompletion) {
  auto req = request("p");
  req.temperature = 0.25;
  req.max_tokens = 77;
  const auto j = Json::parse(Gateway::request_body(req));
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], "p");
  EXPECT_EQ(j["temperature"], 0.25);
  EXPECT_EQ(j["max_tokens"], 77);
}

TEST(Gateway, RecordThenReplayWithoutTransport) {
  const auto path = temp_cassette("instforge_gateway_cassette.jsonl");
  {
    auto transport = std::make_shared<ScriptedTransport>();
    auto cassette = std::make_shared<Cassette>(path, true);
    Sleeps sleeps;
    const Gateway gw(sleeps.options(), transport, cassette);
    EXPECT_EQ(gw.complete(request("a"), Mode::record).text, "echo:a");
    auto second = request("a");
    second.sample_index = 1;
    EXPECT_EQ(gw.complete(second, Mode::record).text, "echo:a");
    EXPECT_EQ(cassette->size(), 2u);
  }
  auto cassette = std::make_shared<Cassette>(path);
  const Gateway replay(GatewayOptions{}, nullptr, cassette);
  EXPECT_EQ(replay.complete(request("a"), Mode::replay).text, "echo:a");
  try {
    replay.complete(request("b"), Mode::replay);
    FAIL() << "expected CassetteMiss";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CassetteMiss);
    EXPECT_EQ(e.detail(), request("b").digest());
  }
  fs::remove(path);
}

TEST(Gateway, ReplayNeverTouchesTransport) {
  const auto path = temp_cassette("instforge_gateway_replay_only.jsonl");
  auto transport = std::make_shared<ScriptedTransport>();
  const Gateway gw(GatewayOptions{}, transport, std::make_shared<Cassette>(path));
  EXPECT_THROW(gw.complete(request(), Mode::replay), Error);
  EXPECT_EQ(transport->calls, 0);
}

TEST(Gateway, CassetteFirstWriteWins) {
  const auto path = temp_cassette("instforge_gateway_first_write.jsonl");
  {
    Cassette c(path, true);
    c.store(request(), "first");
    c.store(request(), "second");
  }
  const Cassette c(path);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(*c.lookup(request().digest()), "first");
  EXPECT_EQ(read_jsonl(path).size(), 1u);
  fs::remove(path);
}

TEST(Gateway, CorruptCassetteIsAnError) {
  const auto path = temp_cassette("instforge_gateway_corrupt.jsonl");
  text::write_file_atomic(path, "{\"request_digest\":\"x\"}\n");
  EXPECT_THROW(Cassette{path}, Error);
  fs::remove(path);
}

TEST(Gateway, BatchKeepsOrderAndCarriesFailures) {
  const auto path = temp_cassette("instforge_gateway_batch.jsonl");
  std::vector<CompletionRequest> reqs;
  for (int i = 0; i < 40; ++i) reqs.push_back(request("p" + std::to_string(i)));
  {
    auto cassette = std::make_shared<Cassette>(path, true);
    const Gateway gw(GatewayOptions{}, std::make_shared<ScriptedTransport>(), cassette);
    const auto out = gw.batch_complete(reqs, 4, Mode::record);
    ASSERT_EQ(out.size(), reqs.size());
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i]->text, "echo:p" + std::to_string(i));
  }
  reqs.push_back(request("unrecorded"));
  const Gateway replay(GatewayOptions{}, nullptr, std::make_shared<Cassette>(path));
  const auto out = replay.batch_complete(reqs, 3, Mode::replay);
  for (std::size_t i = 0; i + 1 < out.size(); ++i) EXPECT_TRUE(out[i].ok());
  ASSERT_FALSE(out.back().ok());
  EXPECT_EQ(out.back().error().code(), ErrorCode::CassetteMiss);
  EXPECT_THROW(replay.batch_complete(reqs, 0, Mode::replay), Error);
  fs::remove(path);
}

TEST(Gateway, ModesParse) {
  EXPECT_EQ(parse_mode("Replay"), Mode::replay);
  EXPECT_EQ(parse_mode("record"), Mode::record);
  EXPECT_EQ(parse_mode("live"), Mode::live);
  EXPECT_THROW(parse_mode("offline"), Error);
}
