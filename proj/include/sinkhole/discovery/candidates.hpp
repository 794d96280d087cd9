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
#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinkhole/common/time.hpp"
#include "sinkhole/discovery/public_suffix.hpp"
#include "sinkhole/dns/query_log.hpp"

namespace sinkhole::discovery {

enum class Origin { SeedList, QueryLog };

std::string_view to_string(Origin o);

/// query_count is positive for QueryLog candidates.
struct CandidateDomain {
  std::string domain;
  Instant first_seen{};
  std::uint64_t query_count = 0;
  Origin origin = Origin::SeedList;
  friend bool operator==(const CandidateDomain&, const CandidateDomain&) = default;
};

using BlockedPredicate = std::function<bool(std::string_view domain)>;

/// Groups logged queries by registrable domain and returns those seen at
/// least `min_count` times that are neither in `known` nor blocked. Sinkholed
/// queries do not count. Sorted by descending count, then by domain.
std::vector<CandidateDomain> mine_query_log(std::span<const dns::QueryLogRecord> records,
                                            const std::set<std::string, std::less<>>& known,
                                            const BlockedPredicate& is_blocked, std::uint64_t min_count,
                                            const PublicSuffixList& psl = PublicSuffixList::embedded());

/// Seed list: one URL (or bare domain) per line, '#' starts a comment.
/// Bare domains are returned as "https://<domain>/".
std::vector<std::string> parse_seed_list(std::string_view text);

/// One SeedList candidate per distinct host, in input order.
std::vector<CandidateDomain> seed_candidates(std::span<const std::string> urls, Instant now);

}  // namespace sinkhole::discovery
