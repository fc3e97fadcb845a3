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

#ifndef VULNPOSTURE_NVD_CLIENT_HPP_
#define VULNPOSTURE_NVD_CLIENT_HPP_

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vulnposture/error.hpp"
#include "vulnposture/model.hpp"

namespace vulnposture {

inline constexpr std::string_view kNvdApiKeyEnv = "NVD_API_KEY";
inline constexpr std::string_view kNvdOrigin = "https://services.nvd.nist.gov";
inline constexpr std::string_view kNvdCvePath = "/rest/json/cves/2.0";
inline constexpr int kNvdMaxResultsPerPage = 2000;

struct QuerySpec {
  std::string cpe;                        // CPE 2.3 formatted string
  std::optional<std::string> cwe_filter;  // CWE-<digits>
  int results_per_page = kNvdMaxResultsPerPage;

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

// Throws `invalid-query` unless the CPE parses, the CWE filter is canonical
// and the page size is in [1, 2000].
void check_query(const QuerySpec& spec);

// Stable text form of a query; two specs are the same query iff their
// normalised forms are equal.
std::string normalized_query(const QuerySpec& spec);

// Lower-case hex SHA-256 of normalized_query.
std::string query_fingerprint(const QuerySpec& spec);

struct CveRecord {
  EntityId id;
  std::string description;
  IdSet cwes;  // NVD-CWE-noinfo / NVD-CWE-Other are dropped
  std::string matched_cpe;
  std::string severity;  // pass-through, may be empty
  std::string source_url;

  friend bool operator==(const CveRecord&, const CveRecord&) = default;
};

// Raised for HTTP 403/429 from the API.
class RateLimitedError : public Error {
 public:
  RateLimitedError(const std::string& message, std::chrono::seconds retry_after)
      : Error(errc::kRateLimited, message), retry_after_(retry_after) {}
  std::chrono::seconds retry_after() const { return retry_after_; }

 private:
  std::chrono::seconds retry_after_;
};

// Raised when a response body cannot be understood; keeps the body.
class MalformedResponseError : public Error {
 public:
  MalformedResponseError(const std::string& message, std::string body)
      : Error(errc::kMalformedResponse, message), body_(std::move(body)) {}
  const std::string& body() const { return body_; }

 private:
  std::string body_;
};

struct PageInfo {
  int start_index = 0;
  int results_per_page = 0;
  int total_results = 0;
};

// Parses one NVD CVE API 2.0 response body. Throws MalformedResponseError.
std::vector<CveRecord> parse_cve_page(std::string_view body, const QuerySpec& spec,
                                      PageInfo* info = nullptr);

// Source of response bodies for one page of a query.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string fetch_page(const QuerySpec& spec, int start_index) = 0;
};

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_until(time_point t) = 0;
};

class SteadyClock : public Clock {
 public:
  time_point now() override;
  void sleep_until(time_point t) override;
};

// Sliding-window limiter: at most `budget` dispatches in any `window`.
// acquire() blocks (through the clock) until a slot is free. Thread-safe;
// waiting callers are served one at a time.
class RateLimiter {
 public:
  static constexpr int kPublicBudget = 5;
  static constexpr int kKeyedBudget = 50;
  static constexpr std::chrono::seconds kWindow{30};

  RateLimiter(int budget, std::chrono::steady_clock::duration window, Clock& clock);

  // 5 per 30 s without an API key, 50 per 30 s with one.
  static RateLimiter for_nvd(bool has_api_key, Clock& clock);

  void acquire();

  int budget() const { return budget_; }
  std::chrono::steady_clock::duration window() const { return window_; }

 private:
  int budget_;
  std::chrono::steady_clock::duration window_;
  Clock& clock_;
  std::mutex mutex_;
  std::deque<Clock::time_point> dispatched_;
};

struct LiveTransportOptions {
  std::string origin = std::string(kNvdOrigin);
  std::string path = std::string(kNvdCvePath);
  std::optional<std::string> api_key;
  std::chrono::seconds timeout{60};
};

// Reads NVD_API_KEY from the environment, if set and non-empty.
std::optional<std::string> api_key_from_env();

class LiveTransport : public Transport {
 public:
  LiveTransport(LiveTransportOptions options, RateLimiter& limiter);
  std::string fetch_page(const QuerySpec& spec, int start_index) override;

 private:
  LiveTransportOptions options_;
  RateLimiter& limiter_;
};

// Fixture directory layout: `manifest.json` maps query fingerprints to the
// verbatim response body of each page:
//   {"entries": [{"fingerprint": "...", "query": {...},
//                 "pages": [{"startIndex": 0, "file": "..."}]}]}
inline constexpr std::string_view kFixtureManifest = "manifest.json";

// Replays recorded bodies byte for byte. Throws `fixture-missing`.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir);
  std::string fetch_page(const QuerySpec& spec, int start_index) override;

 private:
  std::filesystem::path dir_;
};

// Passes requests to `inner` and writes every body into a fixture directory
// readable by FixtureTransport.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(Transport& inner, std::filesystem::path dir);
  std::string fetch_page(const QuerySpec& spec, int start_index) override;

 private:
  Transport& inner_;
  std::filesystem::path dir_;
  std::mutex mutex_;
};

// Content-addressed cache of complete query results (all page bodies),
// one JSON file per fingerprint. Entries older than the TTL are ignored.
// Concurrent readers are fine; writes are serialised and atomic.
class ResponseCache {
 public:
  using WallClock = std::function<std::chrono::system_clock::time_point()>;
  static constexpr std::chrono::hours kDefaultTtl{24};

  explicit ResponseCache(std::filesystem::path dir,
                         std::chrono::seconds ttl = kDefaultTtl,
                         WallClock now = [] { return std::chrono::system_clock::now(); });

  std::optional<std::vector<std::string>> get(const QuerySpec& spec) const;
  void put(const QuerySpec& spec, const std::vector<std::string>& pages);

 private:
  std::filesystem::path PathFor(const QuerySpec& spec) const;

  std::filesystem::path dir_;
  std::chrono::seconds ttl_;
  WallClock now_;
  std::mutex write_mutex_;
};

struct FetchOptions {
  ResponseCache* cache = nullptr;
  // Pages after the first may be requested concurrently (still subject to the
  // transport's rate limiter).
  int max_parallel = 1;
};

// Complete, paginated result set for the query in server order, filtered by
// `cwe_filter` on the client as well.
std::vector<CveRecord> fetch_cves(const QuerySpec& spec, Transport& transport,
                                  const FetchOptions& options = {});

struct CveImportSummary {
  std::size_t added = 0;
  std::size_t updated = 0;
  std::size_t placeholders = 0;

  friend bool operator==(const CveImportSummary&, const CveImportSummary&) = default;
};

// Each record becomes an implementation vulnerability whose avulns are its
// CWEs, and joins VULNS(component_type). CWEs missing from the model are
// created as placeholder mechanism vulnerabilities. Idempotent per record.
// Throws `unknown-component-type` or `would-create-cycle`.
DesignModel import_cves(const DesignModel& model, const std::vector<CveRecord>& records,
                        const EntityId& component_type,
                        CveImportSummary* summary = nullptr);

}  // namespace vulnposture

#endif  // VULNPOSTURE_NVD_CLIENT_HPP_
