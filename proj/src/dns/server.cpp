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

#include "sinkhole/dns/server.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>

#include "sinkhole/common/hash.hpp"
#include "sinkhole/dns/resolver.hpp"

namespace sinkhole::dns {

namespace {

constexpr auto kPollInterval = std::chrono::milliseconds(100);
constexpr auto kTcpIdle = std::chrono::milliseconds(2000);

}  // namespace

std::size_t udp_limit(std::span<const std::uint8_t> query) {
  try {
    const auto m = parse_message(query);
    for (const auto& rr : m.additionals) {
      if (rr.type == rtype::OPT) return std::max<std::size_t>(512, rr.rclass);
    }
  } catch (const MalformedMessage&) {
  }
  return 512;
}

std::vector<std::uint8_t> fit_udp(std::vector<std::uint8_t> wire, std::size_t limit) {
  if (wire.size() <= limit) return wire;
  try {
    auto m = parse_message(wire);
    m.flags.tc = true;
    m.answers.clear();
    m.authorities.clear();
    m.additionals.clear();
    return serialize_message(m);
  } catch (const MalformedMessage&) {
    wire.resize(kHeaderSize);
    wire[2] |= 0x02;
    return wire;
  }
}

DnsServer::DnsServer(WireHandler handler, Options options)
    : handler_(std::move(handler)), options_(std::move(options)) {}

DnsServer::DnsServer(Resolver& resolver, Options options)
    : DnsServer([&resolver](std::span<const std::uint8_t> wire, const std::string& client,
                            bool) { return resolver.handle(wire, client); },
                std::move(options)) {}

DnsServer::~DnsServer() { stop(); }

void DnsServer::start() {
  if (running_) return;
  const auto ep = parse_endpoint(options_.listen, 5353);
  udp_ = bind_socket(ep, SOCK_DGRAM);
  bound_ = bound_endpoint(udp_);
  if (options_.enable_tcp) tcp_ = bind_socket(bound_, SOCK_STREAM);
  running_ = true;
  threads_.emplace_back(&DnsServer::udp_loop, this);
  if (options_.enable_tcp) threads_.emplace_back(&DnsServer::tcp_loop, this);
  for (std::size_t i = 0; i < std::max<std::size_t>(1, options_.workers); ++i) {
    threads_.emplace_back(&DnsServer::worker_loop, this);
  }
}

void DnsServer::stop() {
  if (!running_.exchange(false)) return;
  queue_cv_.notify_all();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  threads_.clear();
  for (auto& job : queue_) {
    if (job.tcp_fd >= 0) ::close(job.tcp_fd);
  }
  queue_.clear();
  udp_.close();
  tcp_.close();
}

void DnsServer::enqueue(Job job) {
  {
    std::lock_guard lock(queue_mu_);
    queue_.push_back(std::move(job));
  }
  queue_cv_.notify_one();
}

void DnsServer::udp_loop() {
  std::vector<std::uint8_t> buf(65535);
  while (running_) {
    if (!wait_readable(udp_.fd(), kPollInterval)) continue;
    Endpoint peer;
    peer.len = sizeof peer.addr;
    const ssize_t n = ::recvfrom(udp_.fd(), buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&peer.addr),
                                 &peer.len);
    if (n <= 0) continue;
    enqueue(Job{std::vector<std::uint8_t>(buf.begin(), buf.begin() + n), peer, -1});
  }
}

void DnsServer::tcp_loop() {
  while (running_) {
    if (!wait_readable(tcp_.fd(), kPollInterval)) continue;
    Endpoint peer;
    peer.len = sizeof peer.addr;
    const int fd = ::accept4(tcp_.fd(), reinterpret_cast<sockaddr*>(&peer.addr), &peer.len, SOCK_CLOEXEC);
    if (fd < 0) continue;
    enqueue(Job{{}, peer, fd});
  }
}

void DnsServer::worker_loop() {
  while (true) {
    Job job;
    {
      std::unique_lock lock(queue_mu_);
      queue_cv_.wait(lock, [this] { return !running_ || !queue_.empty(); });
      if (!running_) return;
      job = std::move(queue_.front());
      queue_.pop_front();
    }
    if (job.tcp_fd >= 0) {
      serve_tcp(job.tcp_fd, job.peer);
      continue;
    }
    try {
      auto answer = handler_(job.wire, job.peer.host(), false);
      if (answer.empty()) continue;
      answer = fit_udp(std::move(answer), udp_limit(job.wire));
      ::sendto(udp_.fd(), answer.data(), answer.size(), 0, reinterpret_cast<const sockaddr*>(&job.peer.addr),
               job.peer.len);
    } catch (const std::exception&) {
      // drop
    }
  }
}

void DnsServer::serve_tcp(int fd, const Endpoint& peer) {
  Socket conn(fd);
  while (running_) {
    const auto deadline = std::chrono::steady_clock::now() + kTcpIdle;
    std::uint8_t len_buf[2];
    if (!read_exact(conn.fd(), len_buf, 2, deadline)) return;
    std::vector<std::uint8_t> query(static_cast<std::size_t>((len_buf[0] << 8) | len_buf[1]));
    if (!read_exact(conn.fd(), query.data(), query.size(), deadline)) return;
    std::vector<std::uint8_t> answer;
    try {
      answer = handler_(query, peer.host(), true);
    } catch (const std::exception&) {
      return;
    }
    if (answer.empty() || answer.size() > 0xffff) return;
    std::vector<std::uint8_t> framed{static_cast<std::uint8_t>(answer.size() >> 8),
                                     static_cast<std::uint8_t>(answer.size() & 0xff)};
    framed.insert(framed.end(), answer.begin(), answer.end());
    if (!write_all(conn.fd(), framed.data(), framed.size())) return;
  }
}

// ---------------------------------------------------------------------------

DnsMessage FakeUpstreamServer::default_answer(const DnsMessage& query) {
  DnsMessage r;
  r.id = query.id;
  r.flags.qr = true;
  r.flags.rd = query.flags.rd;
  r.flags.ra = true;
  r.questions = query.questions;
  if (const auto* q = query.question()) {
    const auto digest = sha256_hex(q->qname);
    const auto octet = static_cast<std::uint8_t>(std::stoi(digest.substr(0, 2), nullptr, 16));
    if (q->qtype == rtype::A) {
      r.answers.push_back(ResourceRecord{q->qname, rtype::A, kClassIN, 300, ipv4_rdata(198, 51, 100, octet)});
    } else if (q->qtype == rtype::AAAA) {
      std::vector<std::uint8_t> v6{0x20, 0x01, 0x0d, 0xb8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, octet};
      r.answers.push_back(ResourceRecord{q->qname, rtype::AAAA, kClassIN, 300, std::move(v6)});
    }
  }
  return r;
}

FakeUpstreamServer::FakeUpstreamServer() : FakeUpstreamServer([](const DnsMessage& q, bool) {
  return std::optional<DnsMessage>(default_answer(q));
}) {}

FakeUpstreamServer::FakeUpstreamServer(Script script) : script_(std::move(script)) {
  server_ = std::make_unique<DnsServer>(
      [this](std::span<const std::uint8_t> wire, const std::string&, bool tcp) -> std::vector<std::uint8_t> {
        (tcp ? tcp_queries_ : udp_queries_)++;
        DnsMessage q;
        try {
          q = parse_message(wire);
        } catch (const MalformedMessage&) {
          return {};
        }
        auto answer = script_(q, tcp);
        if (!answer) return {};
        return serialize_message(*answer);
      },
      DnsServer::Options{"127.0.0.1:0", 2, true});
  server_->start();
}

FakeUpstreamServer::~FakeUpstreamServer() { server_->stop(); }

}  // namespace sinkhole::dns
