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

#include "sinkhole/api/control_api.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <fstream>

#include "sinkhole/common/domain.hpp"
#include "sinkhole/common/hash.hpp"
#include "sinkhole/dns/resolver.hpp"

namespace sinkhole::api {

using nlohmann::json;
using classifier::Verdict;
using classifier::VerdictKind;

void VerdictBook::add(Verdict v) {
  std::lock_guard lock(mu_);
  verdicts_.push_back(std::move(v));
}

void VerdictBook::load(const std::filesystem::path& verdict_log) {
  auto loaded = classifier::read_verdict_log(verdict_log);
  std::lock_guard lock(mu_);
  verdicts_.insert(verdicts_.end(), std::make_move_iterator(loaded.begin()), std::make_move_iterator(loaded.end()));
}

std::vector<Verdict> VerdictBook::all() const {
  std::lock_guard lock(mu_);
  return verdicts_;
}

std::string verdict_status(const Verdict& v, const blocklist::Snapshot& snap, std::string_view tag, Instant now) {
  if (v.verdict == VerdictKind::Unknown) return "unknown";
  const auto domain = classifier::verdict_domain(v);
  if (snap.whitelisted(domain)) return "overridden";
  if (snap.match(domain, now)) return "blocked";
  if (v.verdict == VerdictKind::No) return "not_blocked";
  const bool has_entry = std::any_of(snap.entries().begin(), snap.entries().end(), [&](const blocklist::BlockEntry& e) {
    return e.tag == tag && e.domain == domain && e.active;
  });
  return has_entry ? "inactive" : "pending";
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, {{"error", code}, {"message", message}}, status);
}

bool constant_time_equal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  unsigned char diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
  return diff == 0;
}

std::optional<std::size_t> parse_size(const std::string& s) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || s.empty()) return std::nullopt;
  return v;
}

json window_json(const std::optional<Window>& w) {
  if (!w) return nullptr;
  return {{"start", format_iso8601(w->start)}, {"end", format_iso8601(w->end)}};
}

}  // namespace

ControlApi::ControlApi(ApiContext ctx, ApiOptions options)
    : ctx_(ctx), options_(std::move(options)), server_(std::make_unique<httplib::Server>()),
      started_(std::chrono::steady_clock::now()) {
  if (options_.token.empty()) throw std::invalid_argument("control API needs a non-empty token");
  if (options_.max_page_size == 0) throw std::invalid_argument("max_page_size must be >= 1");
  install_routes();
}

ControlApi::~ControlApi() { stop(); }

void ControlApi::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else if (server_->bind_to_port(host, port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw std::runtime_error("control API cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void ControlApi::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

json ControlApi::status_json() const {
  const auto now = ctx_.clock.now();
  const auto snap = ctx_.store.snapshot();
  const auto policy = snap->tag_policy(options_.tag);
  const auto uptime = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - started_);
  std::uint64_t total = 0;
  std::uint64_t blocked = 0;
  if (ctx_.resolver) {
    // Read blocked first so the pair never shows blocked > total.
    blocked = ctx_.resolver->queries_blocked();
    total = ctx_.resolver->queries_total();
  }
  std::string state = "unset";
  if (policy.state == blocklist::TagPolicy::State::Scheduled) state = "scheduled";
  if (policy.state == blocklist::TagPolicy::State::Disabled) state = "disabled";
  return {{"queries_total", total},
          {"queries_blocked", blocked},
          {"active_entries", snap->active_count(now)},
          {"current_window", window_json(policy.window)},
          {"tag", options_.tag},
          {"tag_state", state},
          {"uptime_secs", uptime.count()},
          {"now", format_iso8601(now)}};
}

void ControlApi::install_routes() {
  auto& srv = *server_;

  auto authorized = [this](const httplib::Request& req, httplib::Response& res) {
    const auto header = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (header.size() > kBearer.size() && header.compare(0, kBearer.size(), kBearer) == 0 &&
        constant_time_equal(std::string_view(header).substr(kBearer.size()), options_.token)) {
      return true;
    }
    send_error(res, 401, "unauthorized", "missing or wrong bearer token");
    return false;
  };

  auto parse_body = [](const httplib::Request& req, httplib::Response& res) -> std::optional<json> {
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      send_error(res, 400, "bad_request", "body must be a JSON object");
      return std::nullopt;
    }
    return j;
  };

  if (!options_.cors_origin.empty()) {
    srv.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (req.get_header_value("Origin") == options_.cors_origin) {
        res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
        res.set_header("Vary", "Origin");
      }
    });
    srv.Options(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      if (req.get_header_value("Origin") != options_.cors_origin) {
        res.status = 403;
        return;
      }
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type, If-None-Match");
      res.set_header("Access-Control-Max-Age", "600");
      res.status = 204;
    });
  }

  srv.Get("/api/status", [this](const httplib::Request&, httplib::Response& res) { send_json(res, status_json()); });

  srv.Get("/api/queries", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<Instant> since;
    std::size_t limit = std::min<std::size_t>(100, options_.max_page_size);
    if (req.has_param("since")) {
      since = parse_iso8601(req.get_param_value("since"));
      if (!since) return send_error(res, 400, "bad_parameter", "since must be an ISO-8601 instant");
    }
    if (req.has_param("limit")) {
      const auto n = parse_size(req.get_param_value("limit"));
      if (!n || *n == 0 || *n > options_.max_page_size) {
        return send_error(res, 400, "bad_parameter",
                          "limit must be between 1 and " + std::to_string(options_.max_page_size));
      }
      limit = *n;
    }
    json arr = json::array();
    for (const auto& r : ctx_.query_log.recent(since, limit)) arr.push_back(dns::to_json(r));
    send_json(res, arr);
  });

  srv.Get("/api/verdicts", [this](const httplib::Request& req, httplib::Response& res) {
    const auto filter = req.has_param("status") ? req.get_param_value("status") : std::string("all");
    if (filter != "all" && filter != "pending") {
      return send_error(res, 400, "bad_parameter", "status must be pending or all");
    }
    const auto now = ctx_.clock.now();
    const auto snap = ctx_.store.snapshot();
    json arr = json::array();
    for (const auto& v : ctx_.verdicts.all()) {
      const auto status = verdict_status(v, *snap, options_.tag, now);
      if (filter == "pending" && status != "pending") continue;
      auto j = classifier::to_json(v);
      j["domain"] = classifier::verdict_domain(v);
      j["status"] = status;
      arr.push_back(std::move(j));
    }
    send_json(res, arr);
  });

  srv.Post("/api/window", [this, authorized, parse_body](const httplib::Request& req, httplib::Response& res) {
    if (!authorized(req, res)) return;
    const auto body = parse_body(req, res);
    if (!body) return;
    const auto tag = body->value("tag", options_.tag);
    const auto start = body->contains("start") ? (*body)["start"] : json(nullptr);
    const auto end = body->contains("end") ? (*body)["end"] : json(nullptr);
    std::optional<Window> window;
    if (!start.is_null() || !end.is_null()) {
      if (!start.is_string() || !end.is_string()) {
        return send_error(res, 400, "invalid_window", "start and end must both be ISO-8601 strings or both null");
      }
      const auto s = parse_iso8601(start.get<std::string>());
      const auto e = parse_iso8601(end.get<std::string>());
      if (!s || !e) return send_error(res, 400, "invalid_window", "start and end must be ISO-8601 instants");
      window = Window{*s, *e};
    }
    try {
      const auto affected = ctx_.store.set_tag_window(tag, window);
      send_json(res, {{"tag", tag}, {"affected", affected}, {"window", window_json(window)}});
    } catch (const blocklist::InvalidWindow&) {
      send_error(res, 400, "invalid_window", "window start must be before its end");
    }
  });

  srv.Post("/api/override", [this, authorized, parse_body](const httplib::Request& req, httplib::Response& res) {
    if (!authorized(req, res)) return;
    const auto body = parse_body(req, res);
    if (!body) return;
    if (!(*body)["domain"].is_string() || !(*body)["action"].is_string()) {
      return send_error(res, 400, "bad_request", "domain and action are required strings");
    }
    const auto action = (*body)["action"].get<std::string>();
    const auto domain = canonicalize_domain((*body)["domain"].get<std::string>());
    if (!domain) return send_error(res, 400, "invalid_domain", "not a valid domain name");
    const auto reason = body->value("reason", std::string{});
    if (action == "whitelist") {
      ctx_.store.whitelist_override(*domain, reason);
    } else if (action == "unwhitelist") {
      ctx_.store.remove_whitelist(*domain);
    } else if (action == "block") {
      ctx_.store.remove_whitelist(*domain);
      ctx_.store.add_entry(*domain, options_.tag, std::nullopt, blocklist::Source::Manual);
    } else {
      return send_error(res, 400, "bad_request", "action must be whitelist, unwhitelist or block");
    }
    const auto now = ctx_.clock.now();
    const auto snap = ctx_.store.snapshot();
    const auto match = snap->match(*domain, now);
    send_json(res, {{"domain", *domain},
                    {"action", action},
                    {"whitelisted", snap->whitelisted(*domain) != nullptr},
                    {"blocked", match.has_value()},
                    {"matched_entry", match ? json(*match) : json(nullptr)}});
  });

  srv.Post("/api/import", [this, authorized](const httplib::Request& req, httplib::Response& res) {
    if (!authorized(req, res)) return;
    const auto tag = req.has_param("tag") ? req.get_param_value("tag") : options_.tag;
    try {
      const auto added = ctx_.store.import_list(req.body, tag);
      send_json(res, {{"tag", tag}, {"added", added}});
    } catch (const blocklist::ParseError& e) {
      send_json(res, {{"error", "parse_error"}, {"message", e.what()}, {"line", e.line()}}, 400);
    }
  });

  srv.Get("/lists/ai-sinkhole.txt", [this](const httplib::Request& req, httplib::Response& res) {
    const auto now = ctx_.clock.now();
    std::string body;
    {
      // Keep the generation stamp while the listed domains stay the same, so
      // unchanged lists keep their ETag.
      std::lock_guard lock(list_mu_);
      const auto fresh = ctx_.store.export_list(options_.tag, now, list_generated_);
      if (!list_generated_set_ || fresh != last_list_) {
        list_generated_ = now;
        list_generated_set_ = true;
        last_list_ = ctx_.store.export_list(options_.tag, now, now);
      }
      body = last_list_;
    }
    const auto etag = "\"" + sha256_hex(body) + "\"";
    res.set_header("ETag", etag);
    res.set_header("Cache-Control", "no-cache");
    if (req.get_header_value("If-None-Match") == etag) {
      res.status = 304;
      return;
    }
    res.set_content(body, "text/plain; charset=utf-8");
  });

  if (options_.dashboard_dir && std::filesystem::is_directory(*options_.dashboard_dir)) {
    srv.set_mount_point("/", options_.dashboard_dir->string());
  }
}

}  // namespace sinkhole::api
