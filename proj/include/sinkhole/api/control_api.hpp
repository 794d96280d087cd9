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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sinkhole/blocklist/store.hpp"
#include "sinkhole/classifier/classifier.hpp"
#include "sinkhole/common/time.hpp"
#include "sinkhole/dns/query_log.hpp"

namespace httplib {
class Server;
}

namespace sinkhole::dns {
class Resolver;
}

namespace sinkhole::api {

/// Verdicts the API can show for review. Thread-safe.
class VerdictBook {
 public:
  void add(classifier::Verdict v);
  void load(const std::filesystem::path& verdict_log);
  std::vector<classifier::Verdict> all() const;

 private:
  mutable std::mutex mu_;
  std::vector<classifier::Verdict> verdicts_;
};

struct ApiOptions {
  std::string token;
  std::size_t max_page_size = 500;
  std::string tag{blocklist::kAiSinkholeTag};
  std::optional<std::filesystem::path> dashboard_dir;
  // Allowed cross-origin caller (the dashboard dev server); empty disables CORS.
  std::string cors_origin;
};

struct ApiContext {
  blocklist::BlocklistStore& store;
  dns::QueryLog& query_log;
  VerdictBook& verdicts;
  const Clock& clock;
  // Optional: counters read as zero without a resolver.
  const dns::Resolver* resolver = nullptr;
};

/// Status of a verdict's domain at `now`: "overridden" (whitelisted),
/// "blocked", "inactive" (entry exists but does not block now), "pending"
/// (Yes with no entry yet), "not_blocked" or "unknown".
std::string verdict_status(const classifier::Verdict& v, const blocklist::Snapshot& snap, std::string_view tag,
                           Instant now);

/// HTTP control plane: status, query feed, verdict review, window control,
/// overrides, list import and the public subscription list.
class ControlApi {
 public:
  ControlApi(ApiContext ctx, ApiOptions options);
  ~ControlApi();

  ControlApi(const ControlApi&) = delete;
  ControlApi& operator=(const ControlApi&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  void start(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

  httplib::Server& server() { return *server_; }

  /// JSON body of GET /api/status.
  nlohmann::json status_json() const;

 private:
  void install_routes();

  ApiContext ctx_;
  ApiOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::chrono::steady_clock::time_point started_;

  std::mutex list_mu_;
  std::string last_list_;
  Instant list_generated_{};
  bool list_generated_set_ = false;
};

}  // namespace sinkhole::api
