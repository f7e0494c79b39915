#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "instforge/gateway.hpp"

namespace instforge {

struct HttpEndpoint {
  /// Full URL of the chat-completions route, e.g.
  /// "https://api.openai.com/v1/chat/completions".
  std::string url;
  std::string api_key;
  std::chrono::seconds timeout{120};
};

/// Posts chat-completion bodies over HTTP(S). Safe for concurrent use.
class HttpTransport : public Transport {
 public:
  /// Throws InvalidArgument for an unparseable URL.
  explicit HttpTransport(HttpEndpoint endpoint);
  TransportResponse post(const std::string& payload) override;

 private:
  HttpEndpoint endpoint_;
  std::string origin_;
  std::string path_;
};

}  // namespace instforge
