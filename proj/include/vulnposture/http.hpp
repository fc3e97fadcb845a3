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

#ifndef VULNPOSTURE_HTTP_HPP_
#define VULNPOSTURE_HTTP_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vulnposture {

using HttpFields = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
  std::optional<std::string> retry_after;
};

// GET `origin` + `path` with URL-encoded `params`. `origin` is
// "scheme://host[:port]"; https requires OpenSSL support. Throws
// `transport-failure` when no response is received.
HttpResponse http_get(const std::string& origin, const std::string& path,
                      const HttpFields& params, const HttpFields& headers,
                      std::chrono::seconds timeout = std::chrono::seconds(60));

// Fetches a full URL and returns the body of a 200 response; throws
// `transport-failure` otherwise.
std::string http_download(const std::string& url);

}  // namespace vulnposture

#endif  // VULNPOSTURE_HTTP_HPP_
