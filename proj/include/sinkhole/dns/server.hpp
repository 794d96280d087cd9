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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "sinkhole/dns/message.hpp"
#include "sinkhole/dns/net.hpp"

namespace sinkhole::dns {

class Resolver;

/// Answers one raw query. `client` is the peer host; `tcp` tells the
/// transport. Returning an empty vector drops the query.
using WireHandler =
    std::function<std::vector<std::uint8_t>(std::span<const std::uint8_t>, const std::string& client, bool tcp)>;

/// UDP and TCP listener on one address feeding a fixed worker pool.
class DnsServer {
 public:
  struct Options {
    std::string listen = "127.0.0.1:5353";
    std::size_t workers = 4;
    bool enable_tcp = true;
  };

  DnsServer(WireHandler handler, Options options);
  DnsServer(Resolver& resolver, Options options);
  ~DnsServer();

  DnsServer(const DnsServer&) = delete;
  DnsServer& operator=(const DnsServer&) = delete;

  void start();
  void stop();
  /// Actual bound address (resolves port 0).
  Endpoint endpoint() const { return bound_; }

 private:
  struct Job {
    std::vector<std::uint8_t> wire;
    Endpoint peer;
    int tcp_fd = -1;
  };

  void udp_loop();
  void tcp_loop();
  void worker_loop();
  void serve_tcp(int fd, const Endpoint& peer);
  void enqueue(Job job);

  WireHandler handler_;
  Options options_;
  Socket udp_;
  Socket tcp_;
  Endpoint bound_;
  std::atomic<bool> running_{false};
  std::vector<std::thread> threads_;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<Job> queue_;
};

/// Truncates an oversized UDP answer to header + question with TC set.
std::vector<std::uint8_t> fit_udp(std::vector<std::uint8_t> wire, std::size_t limit);

/// Largest UDP payload the query advertises (EDNS0), or 512.
std::size_t udp_limit(std::span<const std::uint8_t> query);

/// Scripted upstream for tests and simulated trials. By default answers A
/// queries with an address in 198.51.100.0/24 derived from the name, AAAA
/// with 2001:db8::/96 and everything else with NODATA.
class FakeUpstreamServer {
 public:
  /// Returning nullopt makes the server stay silent.
  using Script = std::function<std::optional<DnsMessage>(const DnsMessage& query, bool over_tcp)>;

  FakeUpstreamServer();
  explicit FakeUpstreamServer(Script script);
  ~FakeUpstreamServer();

  Endpoint endpoint() const { return server_->endpoint(); }
  std::string address() const { return server_->endpoint().to_string(); }
  std::uint64_t udp_queries() const { return udp_queries_.load(); }
  std::uint64_t tcp_queries() const { return tcp_queries_.load(); }

  static DnsMessage default_answer(const DnsMessage& query);

 private:
  Script script_;
  std::atomic<std::uint64_t> udp_queries_{0};
  std::atomic<std::uint64_t> tcp_queries_{0};
  std::unique_ptr<DnsServer> server_;
};

}  // namespace sinkhole::dns
