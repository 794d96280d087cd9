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

#include <atomic>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sinkhole/blocklist/store.hpp"
#include "sinkhole/common/time.hpp"
#include "sinkhole/dns/cache.hpp"
#include "sinkhole/dns/message.hpp"
#include "sinkhole/dns/query_log.hpp"
#include "sinkhole/dns/upstream.hpp"

namespace sinkhole::dns {

struct ResolverConfig {
  std::uint32_t sinkhole_ttl_secs = 2;
  std::size_t cache_max_entries = 10000;
  std::uint32_t cache_max_ttl_secs = 300;
};

/// Answer for a blocked name: A -> 0.0.0.0, AAAA -> ::, anything else NODATA.
/// Mirrors id, opcode, RD and CD of the query; sets QR and RA.
DnsMessage sinkhole_response(const DnsMessage& query, std::uint32_t ttl_secs);

/// Header-and-question reply with the given rcode.
DnsMessage error_response(const DnsMessage& query, std::uint8_t rcode);

/// Blocklist-aware forwarding resolver. Thread-safe: the blocklist is read
/// through one snapshot per query, the cache and log lock internally.
class Resolver {
 public:
  struct Result {
    DnsMessage response;
    std::vector<std::uint8_t> wire;
    ResolutionDecision decision;
  };

  Resolver(const blocklist::BlocklistStore& store, Upstream& upstream, QueryLog& log, const Clock& clock,
           ClientKeyHasher hasher, ResolverConfig config = {});

  /// Resolves a single-question query. Throws std::invalid_argument when the
  /// query does not carry exactly one question.
  Result resolve(const DnsMessage& query, Instant now, std::string_view client_address);

  /// Server entry point: parses, resolves at the clock's current time and
  /// encodes. Malformed input with a readable header gets FORMERR; anything
  /// shorter yields an empty vector (drop).
  std::vector<std::uint8_t> handle(std::span<const std::uint8_t> wire, std::string_view client_address);

  std::uint64_t queries_total() const { return queries_total_.load(); }
  std::uint64_t queries_blocked() const { return queries_blocked_.load(); }
  const ResolverConfig& config() const { return config_; }
  ResponseCache& cache() { return cache_; }

 private:
  void log_query(const DnsMessage& query, Instant now, std::string_view client, const ResolutionDecision& d);

  const blocklist::BlocklistStore& store_;
  Upstream& upstream_;
  QueryLog& log_;
  const Clock& clock_;
  ClientKeyHasher hasher_;
  ResolverConfig config_;
  ResponseCache cache_;
  std::atomic<std::uint64_t> queries_total_{0};
  std::atomic<std::uint64_t> queries_blocked_{0};
};

}  // namespace sinkhole::dns
