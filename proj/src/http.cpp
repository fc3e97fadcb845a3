// Copyright 2026 The vulnposture Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vulnposture/http.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "vulnposture/error.hpp"

namespace vulnposture {
namespace {

std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(errc::kTransportFailure, "not an absolute URL: " + url);
  }
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

HttpResponse http_get(const std::string& origin, const std::string& path,
                      const HttpFields& params, const HttpFields& headers,
                      std::chrono::seconds timeout) {
  httplib::Client client(origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_follow_location(true);
  httplib::Params query(params.begin(), params.end());
  httplib::Headers head(headers.begin(), headers.end());
  auto result = client.Get(path, query, head);
  if (!result) {
    throw Error(errc::kTransportFailure,
                "GET " + origin + path + " failed: " + httplib::to_string(result.error()));
  }
  HttpResponse response{result->status, result->body, std::nullopt};
  if (result->has_header("Retry-After")) {
    response.retry_after = result->get_header_value("Retry-After");
  }
  return response;
}

std::string http_download(const std::string& url) {
  auto [origin, path] = SplitUrl(url);
  HttpResponse response = http_get(origin, path, {}, {});
  if (response.status != 200) {
    throw Error(errc::kTransportFailure,
                "GET " + url + " returned HTTP " + std::to_string(response.status));
  }
  return std::move(response.body);
}

}  // namespace vulnposture
