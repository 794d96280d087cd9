// Copyright 2026 The Sinkhole Authors
//
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

#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinkhole/common/time.hpp"
#include "sinkhole/discovery/dossier.hpp"

namespace sinkhole::discovery {

struct FetchLimits {
  std::chrono::milliseconds timeout{10000};
  std::size_t max_bytes = 2 * 1024 * 1024;
  std::size_t content_cap = 4000;
  std::string user_agent = "sinkhole-crawler/1.0 (+exam network filter)";
};

struct HttpResult {
  enum class Error { None, Timeout, Connection };
  Error error = Error::None;
  int status = 0;
  std::string content_type;
  std::string body;  // at most max_bytes
};

/// Transport behind fetch_dossier, replaceable in tests.
class HttpFetcher {
 public:
  virtual ~HttpFetcher() = default;
  virtual HttpResult get(const std::string& url, const FetchLimits& limits) = 0;
};

/// cpp-httplib client with redirects and TLS verification.
class HttplibFetcher final : public HttpFetcher {
 public:
  HttpResult get(const std::string& url, const FetchLimits& limits) override;
};

/// Builds a dossier for `url`. Never throws: transport failures produce a
/// dossier with the URL, empty metadata and content, and a failure status.
WebsiteDossier fetch_dossier(const std::string& url, const FetchLimits& limits, HttpFetcher& fetcher,
                             const Clock& clock);

/// Minimum spacing between requests to the same host.
class HostRateLimiter {
 public:
  explicit HostRateLimiter(std::chrono::milliseconds min_interval) : min_interval_(min_interval) {}
  /// Blocks until a request to `host` is allowed.
  void acquire(const std::string& host);

 private:
  std::chrono::milliseconds min_interval_;
  std::mutex mu_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_allowed_;
};

/// Fetches many URLs concurrently across hosts, politely per host.
class Crawler {
 public:
  Crawler(FetchLimits limits, std::chrono::milliseconds per_host_interval, HttpFetcher& fetcher, const Clock& clock)
      : limits_(std::move(limits)), limiter_(per_host_interval), fetcher_(fetcher), clock_(clock) {}

  WebsiteDossier fetch(const std::string& url);
  /// Results are in input order.
  std::vector<WebsiteDossier> crawl(std::span<const std::string> urls, std::size_t parallelism = 4);

 private:
  FetchLimits limits_;
  HostRateLimiter limiter_;
  HttpFetcher& fetcher_;
  const Clock& clock_;
};

}  // namespace sinkhole::discovery
