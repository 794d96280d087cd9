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

#include "sinkhole/discovery/candidates.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::discovery {

std::string_view to_string(Origin o) { return o == Origin::QueryLog ? "query_log" : "seed_list"; }

std::vector<CandidateDomain> mine_query_log(std::span<const dns::QueryLogRecord> records,
                                            const std::set<std::string, std::less<>>& known,
                                            const BlockedPredicate& is_blocked, std::uint64_t min_count,
                                            const PublicSuffixList& psl) {
  if (min_count < 1) throw std::invalid_argument("min_count must be at least 1");

  std::map<std::string, CandidateDomain> groups;
  for (const auto& r : records) {
    if (r.decision.outcome == dns::Outcome::Sinkholed) continue;
    const auto reg = psl.registrable_domain(r.qname);
    if (!reg || !canonicalize_domain(*reg)) continue;
    auto [it, inserted] = groups.try_emplace(*reg, CandidateDomain{*reg, r.timestamp, 0, Origin::QueryLog});
    it->second.query_count++;
    it->second.first_seen = std::min(it->second.first_seen, r.timestamp);
  }

  std::vector<CandidateDomain> out;
  for (auto& [domain, c] : groups) {
    if (c.query_count < min_count) continue;
    if (known.contains(domain)) continue;
    if (is_blocked && is_blocked(domain)) continue;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const CandidateDomain& a, const CandidateDomain& b) {
    return a.query_count > b.query_count;
  });
  return out;
}

std::vector<std::string> parse_seed_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    // '#' opens a comment at line start or after whitespace; inside a URL it
    // is a fragment.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.find("://") != std::string_view::npos) {
      out.emplace_back(line);
    } else if (auto d = canonicalize_domain(line)) {
      out.push_back("https://" + *d + "/");
    }
  }
  return out;
}

std::vector<CandidateDomain> seed_candidates(std::span<const std::string> urls, Instant now) {
  std::vector<CandidateDomain> out;
  std::unordered_set<std::string> seen;
  for (const auto& url : urls) {
    auto host = host_of_url(url);
    if (host.empty() || !seen.insert(host).second) continue;
    out.push_back(CandidateDomain{std::move(host), now, 0, Origin::SeedList});
  }
  return out;
}

}  // namespace sinkhole::discovery
