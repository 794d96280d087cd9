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

#include "generators.hpp"

namespace gen {

using namespace sinkhole::dns;

std::string random_name(std::mt19937& rng) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789-";
  std::uniform_int_distribution<int> labels(1, 5), len(1, 20), ch(0, 35);
  std::string out;
  const int n = labels(rng);
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += '.';
    const int l = len(rng);
    for (int j = 0; j < l; ++j) out += alphabet[ch(rng)];
  }
  return out;
}

static ResourceRecord random_record(std::mt19937& rng, const std::string& owner) {
  std::uniform_int_distribution<int> kind(0, 5), byte(0, 255);
  ResourceRecord rr;
  rr.name = owner;
  rr.ttl = static_cast<std::uint32_t>(rng());
  switch (kind(rng)) {
    case 0:
      rr.type = rtype::A;
      rr.rdata = ipv4_rdata(byte(rng), byte(rng), byte(rng), byte(rng));
      break;
    case 1:
      rr.type = rtype::AAAA;
      rr.rdata.resize(16);
      for (auto& b : rr.rdata) b = static_cast<std::uint8_t>(byte(rng));
      break;
    case 2:
      rr.type = rtype::CNAME;
      rr.rdata = encode_name(random_name(rng));
      break;
    case 3: {
      rr.type = rtype::MX;
      rr.rdata = {0, 10};
      const auto n = encode_name(random_name(rng));
      rr.rdata.insert(rr.rdata.end(), n.begin(), n.end());
      break;
    }
    case 4: {
      rr.type = rtype::TXT;
      const auto len = static_cast<std::size_t>(byte(rng) % 60);
      rr.rdata.push_back(static_cast<std::uint8_t>(len));
      for (std::size_t i = 0; i < len; ++i) rr.rdata.push_back(static_cast<std::uint8_t>('a' + i % 26));
      break;
    }
    default:
      rr.type = static_cast<std::uint16_t>(1000 + byte(rng));
      rr.rdata.resize(static_cast<std::size_t>(byte(rng) % 8));
      break;
  }
  return rr;
}

DnsMessage random_message(std::mt19937& rng) {
  std::uniform_int_distribution<int> small(0, 3), bit(0, 1), nib(0, 15);
  DnsMessage m;
  m.id = static_cast<std::uint16_t>(rng());
  m.flags = Flags::from_wire(static_cast<std::uint16_t>(rng()));
  const auto qname = random_name(rng);
  m.questions.push_back({qname, static_cast<std::uint16_t>(nib(rng) + 1), kClassIN});
  for (int i = small(rng); i > 0; --i) m.answers.push_back(random_record(rng, bit(rng) ? qname : random_name(rng)));
  for (int i = small(rng); i > 0; --i) m.authorities.push_back(random_record(rng, random_name(rng)));
  for (int i = small(rng); i > 0; --i) m.additionals.push_back(random_record(rng, qname));
  return m;
}


}  // namespace gen
