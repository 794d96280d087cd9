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

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sinkhole/dns/message.hpp"
#include "sinkhole/dns/net.hpp"

namespace sinkhole::dns {

class UpstreamTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncatedWithoutTcp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Anything that can answer a wire-format query.
class Upstream {
 public:
  virtual ~Upstream() = default;
  /// Returns the raw answer. Throws UpstreamTimeout or TruncatedWithoutTcp.
  virtual std::vector<std::uint8_t> exchange(std::span<const std::uint8_t> query) = 0;
  virtual std::string describe() const = 0;
};

struct UpstreamConfig {
  std::string address = "127.0.0.1:53";
  std::chrono::milliseconds timeout{2000};
  int retries = 1;
  bool tcp_fallback = true;
};

/// Plain DNS over UDP with retry, falling back to TCP when the UDP answer
/// comes back truncated.
class NetworkUpstream final : public Upstream {
 public:
  explicit NetworkUpstream(UpstreamConfig config);

  std::vector<std::uint8_t> exchange(std::span<const std::uint8_t> query) override;
  std::string describe() const override { return endpoint_.to_string(); }

 private:
  UpstreamConfig config_;
  Endpoint endpoint_;
};

/// Sends `query` upstream under a fresh transaction id and returns the answer
/// with the client's id restored. Answers whose id or question do not match
/// the query are discarded as spoofed and count toward the timeout.
std::vector<std::uint8_t> forward_upstream(const DnsMessage& query, Upstream& upstream);

}  // namespace sinkhole::dns
