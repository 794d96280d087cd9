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

#include <sys/socket.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sinkhole::dns {

/// Numeric socket address (IPv4 or IPv6).
struct Endpoint {
  sockaddr_storage addr{};
  socklen_t len = 0;

  int family() const { return addr.ss_family; }
  std::uint16_t port() const;
  /// Host part only, e.g. "127.0.0.1" or "::1".
  std::string host() const;
  /// "127.0.0.1:53" or "[::1]:53".
  std::string to_string() const;
};

/// Parses "host", "host:port", "[v6]" or "[v6]:port" with a numeric host.
/// Throws std::invalid_argument.
Endpoint parse_endpoint(const std::string& text, std::uint16_t default_port);

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

/// Owning file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(int family, int type);
  ~Socket();
  Socket(Socket&& o) noexcept : fd_(o.release()) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() {
    int f = fd_;
    fd_ = -1;
    return f;
  }
  void close();

 private:
  int fd_ = -1;
};

/// Binds a socket of `type` (SOCK_DGRAM/SOCK_STREAM) on `ep`. Port 0 picks an
/// ephemeral port; read it back with bound_endpoint().
Socket bind_socket(const Endpoint& ep, int type);
Endpoint bound_endpoint(const Socket& s);

/// True if readable within `timeout`.
bool wait_readable(int fd, std::chrono::milliseconds timeout);

/// One UDP request/response. Throws TimeoutError or NetworkError.
std::vector<std::uint8_t> udp_exchange(const Endpoint& server, std::span<const std::uint8_t> query,
                                       std::chrono::milliseconds timeout);

/// One request/response over TCP with the two-byte length prefix.
std::vector<std::uint8_t> tcp_exchange(const Endpoint& server, std::span<const std::uint8_t> query,
                                       std::chrono::milliseconds timeout);

/// Reads exactly `n` bytes from a stream socket before `deadline`.
bool read_exact(int fd, std::uint8_t* buf, std::size_t n, std::chrono::steady_clock::time_point deadline);
bool write_all(int fd, const std::uint8_t* buf, std::size_t n);

}  // namespace sinkhole::dns
