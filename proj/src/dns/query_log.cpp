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

#include "sinkhole/dns/query_log.hpp"

#include <fstream>

#include "sinkhole/common/hash.hpp"

namespace sinkhole::dns {

using nlohmann::json;

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Sinkholed:
      return "sinkholed";
    case Outcome::Forwarded:
      return "forwarded";
    case Outcome::CacheHit:
      return "cache_hit";
    case Outcome::ServFail:
      return "servfail";
  }
  return "servfail";
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
  if (s == "sinkholed") return Outcome::Sinkholed;
  if (s == "forwarded") return Outcome::Forwarded;
  if (s == "cache_hit") return Outcome::CacheHit;
  if (s == "servfail") return Outcome::ServFail;
  return std::nullopt;
}

json to_json(const QueryLogRecord& r) {
  json decision{{"outcome", to_string(r.decision.outcome)},
                {"upstream_used", r.decision.upstream_used ? json(*r.decision.upstream_used) : json(nullptr)},
                {"matched_entry", r.decision.matched_entry ? json(*r.decision.matched_entry) : json(nullptr)}};
  return json{{"timestamp", format_iso8601(r.timestamp)},
              {"client", r.client},
              {"qname", r.qname},
              {"qtype", r.qtype},
              {"decision", std::move(decision)}};
}

QueryLogRecord query_record_from_json(const json& j) {
  QueryLogRecord r;
  const auto ts = parse_iso8601(j.at("timestamp").get<std::string>());
  if (!ts) throw std::runtime_error("bad timestamp");
  r.timestamp = *ts;
  r.client = j.at("client").get<std::string>();
  r.qname = j.at("qname").get<std::string>();
  r.qtype = j.at("qtype").get<std::uint16_t>();
  const auto& d = j.at("decision");
  const auto outcome = outcome_from_string(d.at("outcome").get<std::string>());
  if (!outcome) throw std::runtime_error("bad outcome");
  r.decision.outcome = *outcome;
  if (d.contains("upstream_used") && !d["upstream_used"].is_null()) {
    r.decision.upstream_used = d["upstream_used"].get<std::string>();
  }
  if (d.contains("matched_entry") && !d["matched_entry"].is_null()) {
    r.decision.matched_entry = d["matched_entry"].get<blocklist::EntryId>();
  }
  return r;
}

std::string ClientKeyHasher::key(std::string_view address) const {
  return hmac_sha256_hex(salt_, address).substr(0, 16);
}

void QueryLog::append(QueryLogRecord record) {
  std::lock_guard lock(mu_);
  ring_.push_back(std::move(record));
  ++appended_;
  while (ring_.size() > capacity_) ring_.pop_front();
}

std::vector<QueryLogRecord> QueryLog::recent(std::optional<Instant> since, std::size_t limit) const {
  std::lock_guard lock(mu_);
  std::vector<QueryLogRecord> out;
  for (auto it = ring_.rbegin(); it != ring_.rend() && out.size() < limit; ++it) {
    if (since && it->timestamp <= *since) continue;
    out.push_back(*it);
  }
  return out;
}

std::vector<QueryLogRecord> QueryLog::all() const {
  std::lock_guard lock(mu_);
  return {ring_.begin(), ring_.end()};
}

std::uint64_t QueryLog::total_appended() const {
  std::lock_guard lock(mu_);
  return appended_;
}

std::size_t QueryLog::flush_to(const std::filesystem::path& path) {
  std::vector<QueryLogRecord> pending;
  {
    std::lock_guard lock(mu_);
    const std::uint64_t first_in_ring = appended_ - ring_.size();
    const std::uint64_t start = std::max(flushed_, first_in_ring);
    for (std::uint64_t seq = start; seq < appended_; ++seq) {
      pending.push_back(ring_[static_cast<std::size_t>(seq - first_in_ring)]);
    }
    flushed_ = appended_;
  }
  if (pending.empty()) return 0;
  std::ofstream out(path, std::ios::app);
  for (const auto& r : pending) out << to_json(r).dump() << '\n';
  return pending.size();
}

std::vector<QueryLogRecord> read_query_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<QueryLogRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(query_record_from_json(json::parse(line)));
  }
  return out;
}

}  // namespace sinkhole::dns
