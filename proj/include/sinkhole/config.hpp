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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinkhole/classifier/classifier.hpp"
#include "sinkhole/discovery/crawler.hpp"
#include "sinkhole/dns/resolver.hpp"
#include "sinkhole/dns/server.hpp"
#include "sinkhole/dns/upstream.hpp"

namespace sinkhole {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DnsSettings {
  std::string listen = "127.0.0.1:5353";
  std::string upstream = "1.1.1.1:53";
  std::uint32_t sinkhole_ttl_secs = 2;
  std::size_t cache_max_entries = 10000;
  std::chrono::milliseconds upstream_timeout{2000};
  std::size_t workers = 4;
  // Empty: a random salt per process, so client keys do not survive restarts.
  std::string client_salt;
  std::optional<std::filesystem::path> query_log_path;
};

struct CrawlSettings {
  discovery::FetchLimits limits;
  // Requests per second per host.
  double rate_per_host = 0.5;
  std::size_t min_query_count = 3;
  std::vector<std::filesystem::path> seed_lists;

  std::chrono::milliseconds per_host_interval() const;
};

struct ApiSettings {
  std::string listen = "127.0.0.1:8053";
  std::string token;
  std::optional<std::filesystem::path> dashboard_dir;
  std::size_t max_page_size = 500;
  std::string cors_origin;
};

struct AppConfig {
  DnsSettings dns;
  CrawlSettings crawl;
  classifier::ClassifierConfig llm;
  classifier::PolicyConfig policy;
  ApiSettings api;
  std::optional<std::filesystem::path> blocklist_path;
  std::optional<std::filesystem::path> verdict_log_path;

  dns::UpstreamConfig upstream_config() const;
  dns::ResolverConfig resolver_config() const;
};

/// Reads the nested JSON config ({"dns": {...}, "crawl": {...}, ...}).
/// Missing keys keep their defaults; unknown keys and wrong types are errors.
/// Relative paths resolve against the config file's directory.
AppConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
AppConfig load_config(const std::filesystem::path& path);

}  // namespace sinkhole
