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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sinkhole::dns {

/// Record type codes used by the engine. Unknown codes travel through as
/// plain integers.
namespace rtype {
inline constexpr std::uint16_t A = 1;
inline constexpr std::uint16_t NS = 2;
inline constexpr std::uint16_t CNAME = 5;
inline constexpr std::uint16_t SOA = 6;
inline constexpr std::uint16_t PTR = 12;
inline constexpr std::uint16_t MX = 15;
inline constexpr std::uint16_t TXT = 16;
inline constexpr std::uint16_t AAAA = 28;
inline constexpr std::uint16_t SRV = 33;
inline constexpr std::uint16_t DNAME = 39;
inline constexpr std::uint16_t OPT = 41;
inline constexpr std::uint16_t HTTPS = 65;
}  // namespace rtype

inline constexpr std::uint16_t kClassIN = 1;

namespace rcode {
inline constexpr std::uint8_t NoError = 0;
inline constexpr std::uint8_t FormErr = 1;
inline constexpr std::uint8_t ServFail = 2;
inline constexpr std::uint8_t NXDomain = 3;
inline constexpr std::uint8_t NotImp = 4;
inline constexpr std::uint8_t Refused = 5;
}  // namespace rcode

inline constexpr std::size_t kHeaderSize = 12;

class MalformedMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  bool qr = false;
  std::uint8_t opcode = 0;
  bool aa = false;
  bool tc = false;
  bool rd = false;
  bool ra = false;
  bool z = false;
  bool ad = false;
  bool cd = false;
  std::uint8_t rcode = 0;

  std::uint16_t to_wire() const;
  static Flags from_wire(std::uint16_t bits);
  friend bool operator==(const Flags&, const Flags&) = default;
};

struct Question {
  std::string qname;  // lowercase, no trailing dot; "" is the root
  std::uint16_t qtype = rtype::A;
  std::uint16_t qclass = kClassIN;
  friend bool operator==(const Question&, const Question&) = default;
};

struct ResourceRecord {
  std::string name;
  std::uint16_t type = rtype::A;
  std::uint16_t rclass = kClassIN;
  std::uint32_t ttl = 0;
  /// Uncompressed RDATA. Embedded names of well-known types are expanded
  /// during parsing so the bytes stay valid outside the original message.
  std::vector<std::uint8_t> rdata;
  friend bool operator==(const ResourceRecord&, const ResourceRecord&) = default;
};

struct DnsMessage {
  std::uint16_t id = 0;
  Flags flags;
  std::vector<Question> questions;
  std::vector<ResourceRecord> answers;
  std::vector<ResourceRecord> authorities;
  std::vector<ResourceRecord> additionals;

  const Question* question() const { return questions.empty() ? nullptr : &questions.front(); }
  friend bool operator==(const DnsMessage&, const DnsMessage&) = default;
};

/// RFC 1035 decoding. Throws MalformedMessage on truncation, label or name
/// overflow, and forward or looping compression pointers.
DnsMessage parse_message(std::span<const std::uint8_t> bytes);

/// Encodes with name compression for owner and question names.
std::vector<std::uint8_t> serialize_message(const DnsMessage& msg);

/// Builds a recursive query with a single question.
DnsMessage make_query(std::uint16_t id, std::string qname, std::uint16_t qtype);

/// Uncompressed wire encoding of a dotted name. Throws MalformedMessage for
/// labels over 63 octets or names over 255 wire octets.
std::vector<std::uint8_t> encode_name(const std::string& name);

std::vector<std::uint8_t> ipv4_rdata(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d);

/// Reads the transaction id of a raw message; nullopt if shorter than 2 bytes.
std::optional<std::uint16_t> peek_id(std::span<const std::uint8_t> bytes);

/// Overwrites the transaction id in place.
void patch_id(std::vector<std::uint8_t>& bytes, std::uint16_t id);

}  // namespace sinkhole::dns
