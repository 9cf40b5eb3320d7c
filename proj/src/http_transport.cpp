// Copyright 2026 The Wayplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fmt/format.h>

#include "httplib.h"
#include "wayplan/error.hpp"
#include "wayplan/nl_bridge.hpp"

namespace wayplan {
namespace {

// Splits "http://host[:port]/path" into origin and path.
std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (!std::string_view(url).starts_with(kScheme)) {
    throw Error(ErrorCode::kEndpointUnreachable,
                fmt::format("only http:// endpoints are supported: {}", url), "url");
  }
  const std::size_t slash = url.find('/', kScheme.size());
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

class HttpTransport : public Transport {
 public:
  std::string Post(const ExternalEndpoint& endpoint, const std::string& body) override {
    const auto [origin, path] = SplitUrl(endpoint.url);
    httplib::Client client(origin);
    const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      throw Error(ErrorCode::kEndpointUnreachable,
                  fmt::format("POST {} failed: {}", endpoint.url, httplib::to_string(res.error())),
                  "url");
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kEndpointUnreachable,
                  fmt::format("POST {} returned HTTP {}", endpoint.url, res->status), "url");
    }
    return res->body;
  }
};

}  // namespace

std::unique_ptr<Transport> MakeHttpTransport() { return std::make_unique<HttpTransport>(); }

}  // namespace wayplan
