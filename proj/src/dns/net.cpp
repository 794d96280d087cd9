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

#include "sinkhole/dns/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

namespace sinkhole::dns {

std::uint16_t Endpoint::port() const {
  if (family() == AF_INET) return ntohs(reinterpret_cast<const sockaddr_in&>(addr).sin_port);
  if (family() == AF_INET6) return ntohs(reinterpret_cast<const sockaddr_in6&>(addr).sin6_port);
  return 0;
}

std::string Endpoint::host() const {
  char buf[INET6_ADDRSTRLEN] = {};
  if (family() == AF_INET) {
    inet_ntop(AF_INET, &reinterpret_cast<const sockaddr_in&>(addr).sin_addr, buf, sizeof buf);
  } else if (family() == AF_INET6) {
    inet_ntop(AF_INET6, &reinterpret_cast<const sockaddr_in6&>(addr).sin6_addr, buf, sizeof buf);
  }
  return buf;
}

std::string Endpoint::to_string() const {
  if (family() == AF_INET6) return "[" + host() + "]:" + std::to_string(port());
  return host() + ":" + std::to_string(port());
}

Endpoint parse_endpoint(const std::string& text, std::uint16_t default_port) {
  std::string host = text;
  std::string port = std::to_string(default_port);
  if (!text.empty() && text.front() == '[') {
    const auto close = text.find(']');
    if (close == std::string::npos) throw std::invalid_argument("bad endpoint: " + text);
    host = text.substr(1, close - 1);
    if (close + 1 < text.size()) {
      if (text[close + 1] != ':') throw std::invalid_argument("bad endpoint: " + text);
      port = text.substr(close + 2);
    }
  } else if (std::count(text.begin(), text.end(), ':') == 1) {
    const auto colon = text.find(':');
    host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  addrinfo hints{};
  hints.ai_flags = AI_NUMERICHOST | AI_NUMERICSERV;
  hints.ai_family = AF_UNSPEC;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr) {
    throw std::invalid_argument("bad endpoint: " + text);
  }
  Endpoint ep;
  std::memcpy(&ep.addr, res->ai_addr, res->ai_addrlen);
  ep.len = static_cast<socklen_t>(res->ai_addrlen);
  freeaddrinfo(res);
  return ep;
}

Socket::Socket(int family, int type) : fd_(::socket(family, type | SOCK_CLOEXEC, 0)) {
  if (fd_ < 0) throw NetworkError(std::string("socket: ") + std::strerror(errno));
}

Socket::~Socket() { close(); }

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.release();
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Socket bind_socket(const Endpoint& ep, int type) {
  Socket s(ep.family(), type);
  int one = 1;
  setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(s.fd(), reinterpret_cast<const sockaddr*>(&ep.addr), ep.len) != 0) {
    throw NetworkError("bind " + ep.to_string() + ": " + std::strerror(errno));
  }
  if (type == SOCK_STREAM && ::listen(s.fd(), 64) != 0) {
    throw NetworkError("listen " + ep.to_string() + ": " + std::strerror(errno));
  }
  return s;
}

Endpoint bound_endpoint(const Socket& s) {
  Endpoint ep;
  ep.len = sizeof ep.addr;
  getsockname(s.fd(), reinterpret_cast<sockaddr*>(&ep.addr), &ep.len);
  return ep;
}

bool wait_readable(int fd, std::chrono::milliseconds timeout) {
  pollfd p{fd, POLLIN, 0};
  const int ms = static_cast<int>(std::max<std::chrono::milliseconds::rep>(0, timeout.count()));
  int rc;
  do {
    rc = ::poll(&p, 1, ms);
  } while (rc < 0 && errno == EINTR);
  return rc > 0;
}

namespace {

std::chrono::milliseconds remaining(std::chrono::steady_clock::time_point deadline) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
}

}  // namespace

std::vector<std::uint8_t> udp_exchange(const Endpoint& server, std::span<const std::uint8_t> query,
                                       std::chrono::milliseconds timeout) {
  Socket s(server.family(), SOCK_DGRAM);
  if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&server.addr), server.len) != 0) {
    throw NetworkError("connect " + server.to_string() + ": " + std::strerror(errno));
  }
  if (::send(s.fd(), query.data(), query.size(), 0) != static_cast<ssize_t>(query.size())) {
    throw NetworkError("send to " + server.to_string() + ": " + std::strerror(errno));
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::vector<std::uint8_t> buf(65535);
  while (true) {
    const auto left = remaining(deadline);
    if (left.count() <= 0 || !wait_readable(s.fd(), left)) {
      throw TimeoutError("no answer from " + server.to_string());
    }
    const ssize_t n = ::recv(s.fd(), buf.data(), buf.size(), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetworkError("recv from " + server.to_string() + ": " + std::strerror(errno));
    }
    buf.resize(static_cast<std::size_t>(n));
    return buf;
  }
}

bool read_exact(int fd, std::uint8_t* buf, std::size_t n, std::chrono::steady_clock::time_point deadline) {
  std::size_t got = 0;
  while (got < n) {
    const auto left = remaining(deadline);
    if (left.count() <= 0 || !wait_readable(fd, left)) return false;
    const ssize_t r = ::recv(fd, buf + got, n - got, 0);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) return false;
    got += static_cast<std::size_t>(r);
  }
  return true;
}

bool write_all(int fd, const std::uint8_t* buf, std::size_t n) {
  std::size_t sent = 0;
  while (sent < n) {
    const ssize_t w = ::send(fd, buf + sent, n - sent, MSG_NOSIGNAL);
    if (w < 0 && errno == EINTR) continue;
    if (w <= 0) return false;
    sent += static_cast<std::size_t>(w);
  }
  return true;
}

std::vector<std::uint8_t> tcp_exchange(const Endpoint& server, std::span<const std::uint8_t> query,
                                       std::chrono::milliseconds timeout) {
  if (query.size() > 0xffff) throw NetworkError("query too large for TCP framing");
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  Socket s(server.family(), SOCK_STREAM);
  if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&server.addr), server.len) != 0) {
    throw NetworkError("connect " + server.to_string() + ": " + std::strerror(errno));
  }
  std::vector<std::uint8_t> framed;
  framed.reserve(query.size() + 2);
  framed.push_back(static_cast<std::uint8_t>(query.size() >> 8));
  framed.push_back(static_cast<std::uint8_t>(query.size() & 0xff));
  framed.insert(framed.end(), query.begin(), query.end());
  if (!write_all(s.fd(), framed.data(), framed.size())) {
    throw NetworkError("write to " + server.to_string() + " failed");
  }
  std::uint8_t len_buf[2];
  if (!read_exact(s.fd(), len_buf, 2, deadline)) throw TimeoutError("no TCP answer from " + server.to_string());
  std::vector<std::uint8_t> out(static_cast<std::size_t>((len_buf[0] << 8) | len_buf[1]));
  if (!read_exact(s.fd(), out.data(), out.size(), deadline)) {
    throw TimeoutError("truncated TCP answer from " + server.to_string());
  }
  return out;
}

}  // namespace sinkhole::dns
