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

#include "sinkhole/config.hpp"

#include <fstream>
#include <set>

namespace sinkhole {

using nlohmann::json;

namespace {

class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    obj_ = &root.at(name_);
    if (!obj_->is_object()) throw ConfigError(name_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return;
    try {
      out = obj_->at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name_ + "." + key + " has the wrong type");
    }
  }

  void read_ms(const char* key, std::chrono::milliseconds& out) {
    std::int64_t ms = out.count();
    read(key, ms);
    if (ms <= 0) throw ConfigError(name_ + "." + key + " must be > 0");
    out = std::chrono::milliseconds(ms);
  }

  void read_path(const char* key, std::optional<std::filesystem::path>& out, const std::filesystem::path& base) {
    std::string s;
    read(key, s);
    if (!s.empty()) out = base.empty() ? std::filesystem::path(s) : base / s;
  }

  void finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown config key " + name_ + "." + it.key());
    }
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::chrono::milliseconds CrawlSettings::per_host_interval() const {
  if (rate_per_host <= 0) return std::chrono::milliseconds(0);
  return std::chrono::milliseconds(static_cast<std::int64_t>(1000.0 / rate_per_host));
}

dns::UpstreamConfig AppConfig::upstream_config() const {
  dns::UpstreamConfig c;
  c.address = dns.upstream;
  c.timeout = dns.upstream_timeout;
  return c;
}

dns::ResolverConfig AppConfig::resolver_config() const {
  dns::ResolverConfig c;
  c.sinkhole_ttl_secs = dns.sinkhole_ttl_secs;
  c.cache_max_entries = dns.cache_max_entries;
  return c;
}

AppConfig parse_config(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kSections{"dns", "crawl", "discovery", "llm", "policy", "api", "storage"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kSections.count(it.key())) throw ConfigError("unknown config section " + it.key());
  }
  AppConfig c;

  Section dns(j, "dns");
  dns.read("listen", c.dns.listen);
  dns.read("upstream", c.dns.upstream);
  dns.read("sinkhole_ttl_secs", c.dns.sinkhole_ttl_secs);
  dns.read("cache_max_entries", c.dns.cache_max_entries);
  dns.read_ms("upstream_timeout_ms", c.dns.upstream_timeout);
  dns.read("workers", c.dns.workers);
  dns.read("client_salt", c.dns.client_salt);
  dns.read_path("query_log", c.dns.query_log_path, base);
  dns.finish();
  if (c.dns.workers == 0) throw ConfigError("dns.workers must be >= 1");

  Section crawl(j, "crawl");
  crawl.read_ms("timeout_ms", c.crawl.limits.timeout);
  crawl.read("max_bytes", c.crawl.limits.max_bytes);
  crawl.read("content_cap", c.crawl.limits.content_cap);
  crawl.read("rate_per_host", c.crawl.rate_per_host);
  crawl.read("user_agent", c.crawl.limits.user_agent);
  crawl.finish();

  Section discovery(j, "discovery");
  discovery.read("min_query_count", c.crawl.min_query_count);
  std::vector<std::string> seeds;
  discovery.read("seed_lists", seeds);
  for (const auto& s : seeds) c.crawl.seed_lists.push_back(base.empty() ? std::filesystem::path(s) : base / s);
  discovery.finish();
  if (c.crawl.min_query_count == 0) throw ConfigError("discovery.min_query_count must be >= 1");

  Section llm(j, "llm");
  llm.read("endpoint", c.llm.endpoint);
  llm.read("path", c.llm.path);
  llm.read("model", c.llm.model_id);
  llm.read("temperature", c.llm.temperature);
  llm.read("max_retries", c.llm.max_retries);
  llm.read_ms("timeout_ms", c.llm.request_timeout);
  std::optional<std::filesystem::path> criteria;
  llm.read_path("criteria_file", criteria, base);
  llm.read_path("verdict_log", c.verdict_log_path, base);
  llm.finish();
  c.llm.content_cap = c.crawl.limits.content_cap;
  if (criteria) c.llm.criteria_text = read_text(*criteria);
  try {
    c.llm.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("llm: ") + e.what());
  }

  Section policy(j, "policy");
  policy.read("auto_block_on_yes", c.policy.auto_block_on_yes);
  policy.read("tag", c.policy.tag);
  policy.finish();

  Section api(j, "api");
  api.read("listen", c.api.listen);
  api.read("token", c.api.token);
  api.read_path("dashboard_dir", c.api.dashboard_dir, base);
  api.read("max_page_size", c.api.max_page_size);
  api.read("cors_origin", c.api.cors_origin);
  api.finish();
  if (c.api.max_page_size == 0) throw ConfigError("api.max_page_size must be >= 1");

  Section storage(j, "storage");
  storage.read_path("blocklist", c.blocklist_path, base);
  storage.finish();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  const auto text = read_text(path);
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(path.string() + " is not valid JSON");
  return parse_config(j, path.parent_path());
}

}  // namespace sinkhole
