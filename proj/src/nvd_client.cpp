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

#include "vulnposture/nvd_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "vulnposture/cpe.hpp"
#include "vulnposture/http.hpp"
#include "vulnposture/persistence.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {
namespace {

using nlohmann::json;

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(errc::kIoFailure, "SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

json QueryJson(const QuerySpec& spec) {
  return {{"cpeName", spec.cpe},
          {"cweId", spec.cwe_filter ? json(*spec.cwe_filter) : json(nullptr)},
          {"resultsPerPage", spec.results_per_page}};
}

// The first metric of a family, preferring the NVD "Primary" entry.
const json* PickMetric(const json& metrics, const char* family) {
  auto it = metrics.find(family);
  if (it == metrics.end() || !it->is_array() || it->empty()) return nullptr;
  for (const auto& m : *it) {
    if (m.value("type", "") == "Primary") return &m;
  }
  return &it->front();
}

std::string CveSeverity(const json& cve) {
  auto it = cve.find("metrics");
  if (it == cve.end()) return {};
  for (const char* family : {"cvssMetricV40", "cvssMetricV31", "cvssMetricV30"}) {
    if (const json* m = PickMetric(*it, family)) {
      return m->at("cvssData").value("baseSeverity", "");
    }
  }
  if (const json* m = PickMetric(*it, "cvssMetricV2")) {
    return m->value("baseSeverity", "");
  }
  return {};
}

json ReadManifest(const std::filesystem::path& dir) {
  std::filesystem::path path = dir / kFixtureManifest;
  if (!std::filesystem::exists(path)) return json{{"entries", json::array()}};
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(errc::kFixtureMissing,
                "fixture manifest " + path.string() + " is unreadable: " + e.what());
  }
}

std::chrono::seconds ParseRetryAfter(const std::optional<std::string>& header,
                                     std::chrono::seconds fallback) {
  if (!header) return fallback;
  char* end = nullptr;
  long value = std::strtol(header->c_str(), &end, 10);
  if (end == header->c_str() || value < 0) return fallback;
  return std::chrono::seconds(value);
}

}  // namespace

void check_query(const QuerySpec& spec) {
  if (!Cpe23::parse(spec.cpe)) {
    throw Error(errc::kInvalidQuery,
                "'" + spec.cpe + "' is not a CPE 2.3 formatted string");
  }
  if (spec.cwe_filter && !is_canonical_cwe(*spec.cwe_filter)) {
    throw Error(errc::kInvalidQuery, "'" + *spec.cwe_filter + "' is not a CWE id");
  }
  if (spec.results_per_page < 1 || spec.results_per_page > kNvdMaxResultsPerPage) {
    throw Error(errc::kInvalidQuery, "resultsPerPage must be in [1, 2000]");
  }
}

std::string normalized_query(const QuerySpec& spec) {
  return "cpeName=" + spec.cpe + "\ncweId=" + spec.cwe_filter.value_or("") +
         "\nresultsPerPage=" + std::to_string(spec.results_per_page) + "\n";
}

std::string query_fingerprint(const QuerySpec& spec) {
  return Sha256Hex(normalized_query(spec));
}

std::vector<CveRecord> parse_cve_page(std::string_view body, const QuerySpec& spec,
                                      PageInfo* info) {
  std::vector<CveRecord> out;
  try {
    json doc = json::parse(body.begin(), body.end());
    PageInfo page{doc.at("startIndex").get<int>(), doc.at("resultsPerPage").get<int>(),
                  doc.at("totalResults").get<int>()};
    for (const auto& item : doc.at("vulnerabilities")) {
      const json& cve = item.at("cve");
      std::string id = cve.at("id").get<std::string>();
      if (!is_canonical_cve(id)) {
        throw MalformedResponseError("record id '" + id + "' is not a CVE id",
                                     std::string(body));
      }
      CveRecord record{EntityId(id)};
      for (const auto& d : cve.value("descriptions", json::array())) {
        if (d.value("lang", "") == "en") {
          record.description = d.value("value", "");
          break;
        }
      }
      // Every weakness source counts; their union is the association.
      for (const auto& w : cve.value("weaknesses", json::array())) {
        for (const auto& d : w.value("description", json::array())) {
          std::string value = d.value("value", "");
          if (is_canonical_cwe(value)) record.cwes.insert(EntityId(value));
        }
      }
      record.matched_cpe = spec.cpe;
      record.severity = CveSeverity(cve);
      record.source_url = "https://nvd.nist.gov/vuln/detail/" + id;
      out.push_back(std::move(record));
    }
    if (info) *info = page;
  } catch (const json::exception& e) {
    throw MalformedResponseError(std::string("unexpected NVD response: ") + e.what(),
                                 std::string(body));
  }
  return out;
}

Clock::time_point SteadyClock::now() { return std::chrono::steady_clock::now(); }

void SteadyClock::sleep_until(time_point t) { std::this_thread::sleep_until(t); }

RateLimiter::RateLimiter(int budget, std::chrono::steady_clock::duration window,
                         Clock& clock)
    : budget_(budget), window_(window), clock_(clock) {
  if (budget_ < 1) throw Error(errc::kUsage, "rate budget must be positive");
}

RateLimiter RateLimiter::for_nvd(bool has_api_key, Clock& clock) {
  return RateLimiter(has_api_key ? kKeyedBudget : kPublicBudget, kWindow, clock);
}

void RateLimiter::acquire() {
  std::lock_guard<std::mutex> lock(mutex_);
  for (;;) {
    Clock::time_point now = clock_.now();
    while (!dispatched_.empty() && now - dispatched_.front() >= window_) {
      dispatched_.pop_front();
    }
    if (static_cast<int>(dispatched_.size()) < budget_) {
      dispatched_.push_back(now);
      return;
    }
    clock_.sleep_until(dispatched_.front() + window_);
  }
}

std::optional<std::string> api_key_from_env() {
  const char* value = std::getenv(std::string(kNvdApiKeyEnv).c_str());
  if (!value || !*value) return std::nullopt;
  return std::string(value);
}

LiveTransport::LiveTransport(LiveTransportOptions options, RateLimiter& limiter)
    : options_(std::move(options)), limiter_(limiter) {}

std::string LiveTransport::fetch_page(const QuerySpec& spec, int start_index) {
  HttpFields params{{"cpeName", spec.cpe}};
  if (spec.cwe_filter) params.emplace_back("cweId", *spec.cwe_filter);
  params.emplace_back("startIndex", std::to_string(start_index));
  params.emplace_back("resultsPerPage", std::to_string(spec.results_per_page));
  HttpFields headers;
  if (options_.api_key) headers.emplace_back("apiKey", *options_.api_key);

  limiter_.acquire();
  HttpResponse response =
      http_get(options_.origin, options_.path, params, headers, options_.timeout);
  if (response.status == 403 || response.status == 429) {
    auto retry = ParseRetryAfter(
        response.retry_after,
        std::chrono::duration_cast<std::chrono::seconds>(limiter_.window()));
    throw RateLimitedError("NVD API refused the request (HTTP " +
                               std::to_string(response.status) + "); retry after " +
                               std::to_string(retry.count()) + "s",
                           retry);
  }
  if (response.status != 200) {
    throw Error(errc::kTransportFailure,
                "NVD API returned HTTP " + std::to_string(response.status));
  }
  return std::move(response.body);
}

FixtureTransport::FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string FixtureTransport::fetch_page(const QuerySpec& spec, int start_index) {
  if (!std::filesystem::exists(dir_ / kFixtureManifest)) {
    throw Error(errc::kFixtureMissing,
                "no fixture manifest in " + dir_.string());
  }
  json manifest = ReadManifest(dir_);
  std::string fingerprint = query_fingerprint(spec);
  for (const auto& entry : manifest.value("entries", json::array())) {
    if (entry.value("fingerprint", "") != fingerprint) continue;
    for (const auto& page : entry.value("pages", json::array())) {
      if (page.value("startIndex", -1) != start_index) continue;
      std::filesystem::path file = dir_ / page.at("file").get<std::string>();
      if (!std::filesystem::exists(file)) {
        throw Error(errc::kFixtureMissing, "fixture file " + file.string() + " is missing");
      }
      return read_file(file);
    }
  }
  throw Error(errc::kFixtureMissing,
              "no recorded response for " + spec.cpe +
                  (spec.cwe_filter ? " / " + *spec.cwe_filter : std::string()) +
                  " at startIndex " + std::to_string(start_index) + " in " +
                  dir_.string());
}

RecordingTransport::RecordingTransport(Transport& inner, std::filesystem::path dir)
    : inner_(inner), dir_(std::move(dir)) {}

std::string RecordingTransport::fetch_page(const QuerySpec& spec, int start_index) {
  std::string body = inner_.fetch_page(spec, start_index);

  std::lock_guard<std::mutex> lock(mutex_);
  std::filesystem::create_directories(dir_);
  std::string fingerprint = query_fingerprint(spec);
  std::string file = fingerprint.substr(0, 16) + "-" + std::to_string(start_index) + ".json";
  write_file_atomic(dir_ / file, body);

  json manifest = ReadManifest(dir_);
  json* entry = nullptr;
  for (auto& e : manifest["entries"]) {
    if (e.value("fingerprint", "") == fingerprint) entry = &e;
  }
  if (!entry) {
    manifest["entries"].push_back(
        {{"fingerprint", fingerprint}, {"query", QueryJson(spec)}, {"pages", json::array()}});
    entry = &manifest["entries"].back();
  }
  json& pages = (*entry)["pages"];
  bool replaced = false;
  for (auto& p : pages) {
    if (p.value("startIndex", -1) == start_index) {
      p["file"] = file;
      replaced = true;
    }
  }
  if (!replaced) pages.push_back({{"startIndex", start_index}, {"file", file}});
  std::sort(pages.begin(), pages.end(), [](const json& a, const json& b) {
    return a.at("startIndex").get<int>() < b.at("startIndex").get<int>();
  });
  write_file_atomic(dir_ / kFixtureManifest, manifest.dump(2) + "\n");
  return body;
}

ResponseCache::ResponseCache(std::filesystem::path dir, std::chrono::seconds ttl,
                             WallClock now)
    : dir_(std::move(dir)), ttl_(ttl), now_(std::move(now)) {}

std::filesystem::path ResponseCache::PathFor(const QuerySpec& spec) const {
  return dir_ / (query_fingerprint(spec) + ".json");
}

std::optional<std::vector<std::string>> ResponseCache::get(const QuerySpec& spec) const {
  std::filesystem::path path = PathFor(spec);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    json entry = json::parse(read_file(path));
    if (entry.at("fingerprint").get<std::string>() != query_fingerprint(spec)) {
      return std::nullopt;
    }
    auto retrieved = std::chrono::system_clock::time_point(
        std::chrono::seconds(entry.at("retrieved_at").get<std::int64_t>()));
    if (now_() - retrieved >= ttl_) return std::nullopt;
    return entry.at("pages").get<std::vector<std::string>>();
  } catch (const std::exception&) {
    // A corrupt entry is a miss; the next put overwrites it.
    return std::nullopt;
  }
}

void ResponseCache::put(const QuerySpec& spec, const std::vector<std::string>& pages) {
  json entry{{"fingerprint", query_fingerprint(spec)},
             {"query", QueryJson(spec)},
             {"retrieved_at", std::chrono::duration_cast<std::chrono::seconds>(
                                  now_().time_since_epoch())
                                  .count()},
             {"pages", pages}};
  std::lock_guard<std::mutex> lock(write_mutex_);
  std::filesystem::create_directories(dir_);
  write_file_atomic(PathFor(spec), entry.dump() + "\n");
}

std::vector<CveRecord> fetch_cves(const QuerySpec& spec, Transport& transport,
                                  const FetchOptions& options) {
  check_query(spec);

  std::vector<std::string> pages;
  if (auto cached = options.cache ? options.cache->get(spec) : std::nullopt) {
    pages = std::move(*cached);
  } else {
    pages.push_back(transport.fetch_page(spec, 0));
    PageInfo first;
    parse_cve_page(pages.front(), spec, &first);
    std::vector<int> starts;
    for (int s = spec.results_per_page; s < first.total_results; s += spec.results_per_page) {
      starts.push_back(s);
    }
    int parallel = std::max(1, options.max_parallel);
    for (std::size_t i = 0; i < starts.size(); i += static_cast<std::size_t>(parallel)) {
      std::vector<std::future<std::string>> batch;
      for (std::size_t j = i; j < starts.size() && j < i + static_cast<std::size_t>(parallel); ++j) {
        int start = starts[j];
        batch.push_back(std::async(parallel > 1 ? std::launch::async : std::launch::deferred,
                                   [&transport, &spec, start] {
                                     return transport.fetch_page(spec, start);
                                   }));
      }
      for (auto& f : batch) pages.push_back(f.get());
    }
    if (options.cache) options.cache->put(spec, pages);
  }

  std::vector<CveRecord> out;
  int expected_start = 0;
  for (const auto& body : pages) {
    PageInfo info;
    auto records = parse_cve_page(body, spec, &info);
    if (info.start_index != expected_start) {
      throw MalformedResponseError("page startIndex " + std::to_string(info.start_index) +
                                       " does not match requested " +
                                       std::to_string(expected_start),
                                   body);
    }
    expected_start += spec.results_per_page;
    for (auto& r : records) {
      if (spec.cwe_filter && !r.cwes.count(EntityId(*spec.cwe_filter))) continue;
      out.push_back(std::move(r));
    }
  }
  return out;
}

DesignModel import_cves(const DesignModel& model, const std::vector<CveRecord>& records,
                        const EntityId& component_type, CveImportSummary* summary) {
  if (!model.component_types.count(component_type)) {
    throw Error(errc::kUnknownComponentType,
                "unknown component type '" + component_type.str() + "'");
  }
  DesignModel next = model;
  CveImportSummary counts;
  for (const auto& record : records) {
    for (const auto& cwe : record.cwes) {
      if (next.vulnerabilities.count(cwe)) continue;
      Vulnerability placeholder{cwe, VulnerabilityKind::kMechanism, cwe.str()};
      placeholder.placeholder = true;
      put(next, std::move(placeholder));
      ++counts.placeholders;
    }
    auto it = next.vulnerabilities.find(record.id);
    bool exists = it != next.vulnerabilities.end();
    Vulnerability v = exists ? it->second : Vulnerability{record.id};
    v.kind = VulnerabilityKind::kImplementation;
    if (v.title.empty()) v.title = record.id.str();
    v.avulns.insert(record.cwes.begin(), record.cwes.end());
    VulnerabilityMetadata meta = v.metadata.value_or(VulnerabilityMetadata{});
    if (!record.description.empty()) meta.description = record.description;
    if (!record.severity.empty()) meta.severity = record.severity;
    meta.source_url = record.source_url;
    v.metadata = std::move(meta);
    put(next, std::move(v));
    next.component_types.at(component_type).vulns.insert(record.id);
    ++(exists ? counts.updated : counts.added);
  }
  if (auto cycles = abstraction_cycles(next); !cycles.empty()) {
    throw Error(errc::kWouldCreateCycle,
                "CVE import would create an abstraction cycle through " +
                    cycles.front().front().str());
  }
  if (summary) *summary = counts;
  return next;
}

}  // namespace vulnposture
