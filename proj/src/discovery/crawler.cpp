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

#include "sinkhole/discovery/crawler.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::discovery {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path + query, at least "/"
};

std::optional<SplitUrl> split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) return std::nullopt;
  const auto scheme = lowercase_ascii(url.substr(0, scheme_end));
  if (scheme != "http" && scheme != "https") return std::nullopt;
  auto rest = url.substr(scheme_end + 3);
  const auto path_start = rest.find_first_of("/?#");
  SplitUrl out;
  out.origin = scheme + "://" + std::string(rest.substr(0, path_start));
  if (path_start == std::string_view::npos) {
    out.target = "/";
  } else {
    auto target = rest.substr(path_start);
    if (const auto frag = target.find('#'); frag != std::string_view::npos) target = target.substr(0, frag);
    out.target = target.empty() || target.front() != '/' ? "/" + std::string(target) : std::string(target);
  }
  return out;
}

bool looks_textual(std::string_view content_type) {
  if (content_type.empty()) return true;
  const auto ct = lowercase_ascii(content_type);
  return ct.find("html") != std::string::npos || ct.find("text") != std::string::npos ||
         ct.find("xml") != std::string::npos;
}

}  // namespace

HttpResult HttplibFetcher::get(const std::string& url, const FetchLimits& limits) {
  HttpResult result;
  const auto parts = split_url(url);
  if (!parts) {
    result.error = HttpResult::Error::Connection;
    return result;
  }
  const auto started = std::chrono::steady_clock::now();
  try {
    httplib::Client cli(parts->origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(limits.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(limits.timeout - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());
    cli.set_follow_location(true);
    httplib::Headers headers{{"User-Agent", limits.user_agent},
                             {"Accept", "text/html,application/xhtml+xml;q=0.9,*/*;q=0.5"},
                             {"Accept-Language", "en;q=0.9,*;q=0.5"}};
    bool capped = false;
    auto res = cli.Get(
        parts->target, headers,
        [&](const httplib::Response& r) {
          result.status = r.status;
          result.content_type = r.get_header_value("Content-Type");
          return true;
        },
        [&](const char* data, std::size_t len) {
          const std::size_t room = limits.max_bytes - std::min(limits.max_bytes, result.body.size());
          result.body.append(data, std::min(room, len));
          if (len > room) {
            capped = true;
            return false;
          }
          return true;
        });
    if (!res && !(capped && result.status != 0)) {
      const auto err = res.error();
      const auto elapsed = std::chrono::steady_clock::now() - started;
      const bool slow = elapsed >= limits.timeout * 9 / 10;
      result.error = (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && slow))
                         ? HttpResult::Error::Timeout
                         : HttpResult::Error::Connection;
    }
  } catch (const std::exception&) {
    result.error = HttpResult::Error::Connection;
  }
  return result;
}

WebsiteDossier fetch_dossier(const std::string& url, const FetchLimits& limits, HttpFetcher& fetcher,
                             const Clock& clock) {
  WebsiteDossier d;
  d.url = url;
  HttpResult r;
  try {
    r = fetcher.get(url, limits);
  } catch (...) {
    r.error = HttpResult::Error::Connection;
  }
  d.fetched_at = clock.now();
  switch (r.error) {
    case HttpResult::Error::Timeout:
      d.fetch_status = FetchStatus::timed_out();
      return d;
    case HttpResult::Error::Connection:
      d.fetch_status = FetchStatus::blocked();
      return d;
    case HttpResult::Error::None:
      break;
  }
  if (r.status < 200 || r.status >= 300) {
    d.fetch_status = FetchStatus::http_error(r.status);
    return d;
  }
  d.fetch_status = FetchStatus::ok();
  if (looks_textual(r.content_type)) {
    d.metadata = extract_metadata(r.body);
    d.content = html_to_summary(r.body, limits.content_cap);
  }
  return d;
}

void HostRateLimiter::acquire(const std::string& host) {
  if (min_interval_.count() <= 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    auto& next = next_allowed_[host];
    slot = std::max(now, next);
    next = slot + min_interval_;
  }
  std::this_thread::sleep_until(slot);
}

WebsiteDossier Crawler::fetch(const std::string& url) {
  limiter_.acquire(host_of_url(url));
  return fetch_dossier(url, limits_, fetcher_, clock_);
}

std::vector<WebsiteDossier> Crawler::crawl(std::span<const std::string> urls, std::size_t parallelism) {
  std::vector<WebsiteDossier> out(urls.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < urls.size(); i = next++) out[i] = fetch(urls[i]);
  };
  std::vector<std::jthread> pool;
  const std::size_t n = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, urls.size()));
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
  return out;
}

}  // namespace sinkhole::discovery
