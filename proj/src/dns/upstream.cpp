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

#include "sinkhole/dns/upstream.hpp"

#include <random>

namespace sinkhole::dns {

NetworkUpstream::NetworkUpstream(UpstreamConfig config)
    : config_(std::move(config)), endpoint_(parse_endpoint(config_.address, 53)) {}

std::vector<std::uint8_t> NetworkUpstream::exchange(std::span<const std::uint8_t> query) {
  std::vector<std::uint8_t> answer;
  bool answered = false;
  for (int attempt = 0; attempt <= config_.retries && !answered; ++attempt) {
    try {
      answer = udp_exchange(endpoint_, query, config_.timeout);
      answered = true;
    } catch (const TimeoutError&) {
    } catch (const NetworkError&) {
    }
  }
  if (!answered) throw UpstreamTimeout("upstream " + describe() + " did not answer");

  if (answer.size() >= kHeaderSize && Flags::from_wire(static_cast<std::uint16_t>((answer[2] << 8) | answer[3])).tc) {
    if (!config_.tcp_fallback) throw TruncatedWithoutTcp("truncated answer and TCP fallback disabled");
    try {
      return tcp_exchange(endpoint_, query, config_.timeout);
    } catch (const TimeoutError&) {
      throw UpstreamTimeout("upstream " + describe() + " TCP retry timed out");
    } catch (const NetworkError& e) {
      throw TruncatedWithoutTcp(std::string("TCP retry failed: ") + e.what());
    }
  }
  return answer;
}

namespace {

std::uint16_t random_id() {
  thread_local std::mt19937 rng{std::random_device{}()};
  return static_cast<std::uint16_t>(std::uniform_int_distribution<int>(0, 0xffff)(rng));
}

}  // namespace

std::vector<std::uint8_t> forward_upstream(const DnsMessage& query, Upstream& upstream) {
  DnsMessage outbound = query;
  outbound.id = random_id();
  const auto wire = serialize_message(outbound);
  auto answer = upstream.exchange(wire);

  DnsMessage parsed;
  try {
    parsed = parse_message(answer);
  } catch (const MalformedMessage&) {
    throw UpstreamTimeout("upstream " + upstream.describe() + " sent a malformed answer");
  }
  if (parsed.id != outbound.id || !parsed.flags.qr || parsed.questions != query.questions) {
    throw UpstreamTimeout("upstream " + upstream.describe() + " answer does not match the query");
  }
  patch_id(answer, query.id);
  return answer;
}

}  // namespace sinkhole::dns
