// mock_llm_server: serves chat completions from the offline mock responder.

#include <csignal>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"
#include "instforge/mock_responder.hpp"

namespace {

httplib::Server* g_server = nullptr;

void stop(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline chat-completions server backed by the mock responder"};
  std::string host = "127.0.0.1";
  int port = 0;
  std::string vocab_dir;
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Port (0 picks a free one)");
  app.add_option("--vocab-dir", vocab_dir, "Directory with task.txt, instruction.txt, knowledge.txt")
      ->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  try {
    auto vocab = vocab_dir.empty() ? instforge::MockVocabulary::builtin()
                                   : instforge::MockVocabulary::load(vocab_dir + "/task.txt",
                                                                     vocab_dir + "/instruction.txt",
                                                                     vocab_dir + "/knowledge.txt");
    instforge::MockTransport mock(std::move(vocab));
    httplib::Server server;
    server.Post(R"(.*/chat/completions)", [&](const httplib::Request& req, httplib::Response& res) {
      const auto reply = mock.post(req.body);
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
    if (port == 0) {
      port = server.bind_to_any_port(host);
    } else if (!server.bind_to_port(host, port)) {
      port = -1;
    }
    if (port < 0) {
      std::fprintf(stderr, "error: cannot bind %s\n", host.c_str());
      return 1;
    }
    g_server = &server;
    std::signal(SIGINT, stop);
    std::signal(SIGTERM, stop);
    std::printf("listening on http://%s:%d/v1/chat/completions\n", host.c_str(), port);
    std::fflush(stdout);
    server.listen_after_bind();
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
