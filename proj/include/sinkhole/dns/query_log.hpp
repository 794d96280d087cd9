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

#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sinkhole/blocklist/store.hpp"
#include "sinkhole/common/time.hpp"

namespace sinkhole::dns {

enum class Outcome { Sinkholed, Forwarded, CacheHit, ServFail };

std::string_view to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);

/// matched_entry is set exactly when outcome is Sinkholed.
struct ResolutionDecision {
  Outcome outcome = Outcome::Forwarded;
  std::optional<std::string> upstream_used;
  std::optional<blocklist::EntryId> matched_entry;
  friend bool operator==(const ResolutionDecision&, const ResolutionDecision&) = default;
};

struct QueryLogRecord {
  Instant timestamp{};
  std::string client;  // anonymized key, never the raw address
  std::string qname;
  std::uint16_t qtype = 0;
  ResolutionDecision decision;
  friend bool operator==(const QueryLogRecord&, const QueryLogRecord&) = default;
};

nlohmann::json to_json(const QueryLogRecord& r);
QueryLogRecord query_record_from_json(const nlohmann::json& j);

/// Keyed one-way hash of client addresses. Stable for a given salt.
class ClientKeyHasher {
 public:
  explicit ClientKeyHasher(std::string salt) : salt_(std::move(salt)) {}
  std::string key(std::string_view address) const;

 private:
  std::string salt_;
};

/// Bounded in-memory ring of recent queries. Appends take one short lock;
/// persistence happens on flush_to from a separate thread.
class QueryLog {
 public:
  explicit QueryLog(std::size_t capacity = 10000) : capacity_(capacity) {}

  void append(QueryLogRecord record);

  /// Newest first, strictly after `since` when given, at most `limit`.
  std::vector<QueryLogRecord> recent(std::optional<Instant> since, std::size_t limit) const;

  /// Oldest first.
  std::vector<QueryLogRecord> all() const;

  /// Appends records not yet written to `path` as JSON lines. Records that
  /// fell out of the ring before a flush are lost. Returns how many were written.
  std::size_t flush_to(const std::filesystem::path& path);

  std::uint64_t total_appended() const;

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::deque<QueryLogRecord> ring_;
  std::uint64_t appended_ = 0;
  std::uint64_t flushed_ = 0;
};

/// Reads a JSON-lines query log written by flush_to.
std::vector<QueryLogRecord> read_query_log(const std::filesystem::path& path);

}  // namespace sinkhole::dns
