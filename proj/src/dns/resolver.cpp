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

#include "sinkhole/dns/resolver.hpp"

#include <algorithm>
#include <stdexcept>

namespace sinkhole::dns {

namespace {

constexpr std::uint16_t kEdnsPayload = 1232;

DnsMessage reply_skeleton(const DnsMessage& query) {
  DnsMessage r;
  r.id = query.id;
  r.flags.qr = true;
  r.flags.opcode = query.flags.opcode;
  r.flags.rd = query.flags.rd;
  r.flags.cd = query.flags.cd;
  r.flags.ra = true;
  r.questions = query.questions;
  const bool has_opt = std::any_of(query.additionals.begin(), query.additionals.end(),
                                   [](const ResourceRecord& rr) { return rr.type == rtype::OPT; });
  if (has_opt) r.additionals.push_back(ResourceRecord{"", rtype::OPT, kEdnsPayload, 0, {}});
  return r;
}

}  // namespace

DnsMessage sinkhole_response(const DnsMessage& query, std::uint32_t ttl_secs) {
  DnsMessage r = reply_skeleton(query);
  r.flags.rcode = rcode::NoError;
  if (const auto* q = query.question()) {
    if (q->qtype == rtype::A) {
      r.answers.push_back(ResourceRecord{q->qname, rtype::A, kClassIN, ttl_secs, {0, 0, 0, 0}});
    } else if (q->qtype == rtype::AAAA) {
      r.answers.push_back(
          ResourceRecord{q->qname, rtype::AAAA, kClassIN, ttl_secs, std::vector<std::uint8_t>(16, 0)});
    }
  }
  return r;
}

DnsMessage error_response(const DnsMessage& query, std::uint8_t rc) {
  DnsMessage r = reply_skeleton(query);
  r.flags.rcode = rc;
  return r;
}

Resolver::Resolver(const blocklist::BlocklistStore& store, Upstream& upstream, QueryLog& log, const Clock& clock,
                   ClientKeyHasher hasher, ResolverConfig config)
    : store_(store),
      upstream_(upstream),
      log_(log),
      clock_(clock),
      hasher_(std::move(hasher)),
      config_(config),
      cache_(config.cache_max_entries) {}

Resolver::Result Resolver::resolve(const DnsMessage& query, Instant now, std::string_view client_address) {
  if (query.questions.size() != 1) throw std::invalid_argument("query must carry exactly one question");
  const Question& q = query.questions.front();
  ++queries_total_;

  Result result;
  if (const auto entry = store_.snapshot()->match(q.qname, now)) {
    ++queries_blocked_;
    result.response = sinkhole_response(query, config_.sinkhole_ttl_secs);
    result.wire = serialize_message(result.response);
    result.decision = ResolutionDecision{Outcome::Sinkholed, std::nullopt, entry};
  } else if (auto cached = cache_.get(q.qname, q.qtype, now)) {
    patch_id(*cached, query.id);
    result.wire = std::move(*cached);
    result.response = parse_message(result.wire);
    result.decision = ResolutionDecision{Outcome::CacheHit, std::nullopt, std::nullopt};
  } else {
    try {
      result.wire = forward_upstream(query, upstream_);
      result.response = parse_message(result.wire);
      result.decision = ResolutionDecision{Outcome::Forwarded, upstream_.describe(), std::nullopt};
      const auto& answers = result.response.answers;
      if (result.response.flags.rcode == rcode::NoError && !answers.empty() && !result.response.flags.tc) {
        std::uint32_t ttl = config_.cache_max_ttl_secs;
        for (const auto& rr : answers) ttl = std::min(ttl, rr.ttl);
        if (ttl > 0) cache_.put(q.qname, q.qtype, result.wire, now + std::chrono::seconds{ttl});
      }
    } catch (const std::exception&) {
      result.response = error_response(query, rcode::ServFail);
      result.wire = serialize_message(result.response);
      result.decision = ResolutionDecision{Outcome::ServFail, upstream_.describe(), std::nullopt};
    }
  }
  log_query(query, now, client_address, result.decision);
  return result;
}

void Resolver::log_query(const DnsMessage& query, Instant now, std::string_view client,
                         const ResolutionDecision& d) {
  try {
    const auto& q = query.questions.front();
    log_.append(QueryLogRecord{now, hasher_.key(client), q.qname, q.qtype, d});
  } catch (...) {
    // best effort
  }
}

std::vector<std::uint8_t> Resolver::handle(std::span<const std::uint8_t> wire, std::string_view client_address) {
  DnsMessage query;
  try {
    query = parse_message(wire);
  } catch (const MalformedMessage&) {
    if (wire.size() < kHeaderSize) return {};
    DnsMessage header_only;
    header_only.id = static_cast<std::uint16_t>((wire[0] << 8) | wire[1]);
    header_only.flags = Flags::from_wire(static_cast<std::uint16_t>((wire[2] << 8) | wire[3]));
    return serialize_message(error_response(header_only, rcode::FormErr));
  }
  if (query.flags.qr) return {};
  if (query.flags.opcode != 0) return serialize_message(error_response(query, rcode::NotImp));
  if (query.questions.size() != 1) return serialize_message(error_response(query, rcode::FormErr));
  return resolve(query, clock_.now(), client_address).wire;
}

}  // namespace sinkhole::dns
