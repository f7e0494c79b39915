#include "instforge/http_transport.hpp"

#include "httplib.h"

namespace instforge {

HttpTransport::HttpTransport(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  const auto& url = endpoint_.url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "endpoint URL lacks scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw Error(ErrorCode::InvalidArgument, "unsupported scheme: " + url);
}

TransportResponse HttpTransport::post(const std::string& payload) {
  // One client per call keeps the transport free of shared connection state.
  httplib::Client client(origin_);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(endpoint_.timeout);
  client.set_write_timeout(endpoint_.timeout);
  httplib::Headers headers;
  if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);

  auto res = client.Post(path_, headers, payload, "application/json");
  if (!res) return TransportResponse{0, {}, "request failed: " + httplib::to_string(res.error())};
  return TransportResponse{res->status, res->body, {}};
}

}  // namespace instforge
