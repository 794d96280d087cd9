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

#include "sinkhole/dns/message.hpp"

#include <unordered_map>

namespace sinkhole::dns {

std::uint16_t Flags::to_wire() const {
  std::uint16_t v = 0;
  if (qr) v |= 0x8000;
  v |= static_cast<std::uint16_t>((opcode & 0x0f) << 11);
  if (aa) v |= 0x0400;
  if (tc) v |= 0x0200;
  if (rd) v |= 0x0100;
  if (ra) v |= 0x0080;
  if (z) v |= 0x0040;
  if (ad) v |= 0x0020;
  if (cd) v |= 0x0010;
  v |= rcode & 0x0f;
  return v;
}

Flags Flags::from_wire(std::uint16_t v) {
  Flags f;
  f.qr = v & 0x8000;
  f.opcode = static_cast<std::uint8_t>((v >> 11) & 0x0f);
  f.aa = v & 0x0400;
  f.tc = v & 0x0200;
  f.rd = v & 0x0100;
  f.ra = v & 0x0080;
  f.z = v & 0x0040;
  f.ad = v & 0x0020;
  f.cd = v & 0x0010;
  f.rcode = static_cast<std::uint8_t>(v & 0x0f);
  return f;
}

namespace {

constexpr std::size_t kMaxNameWire = 255;
constexpr int kMaxPointerHops = 64;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

  std::size_t pos() const { return pos_; }
  std::size_t size() const { return buf_.size(); }

  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw MalformedMessage("message truncated");
  }

  std::uint8_t u8() {
    need(1);
    return buf_[pos_++];
  }

  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((buf_[pos_] << 8) | buf_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }

  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> out(buf_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                  buf_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
  }

  // Decodes a possibly compressed name starting at the cursor. Pointers must
  // target strictly earlier offsets, which rules out loops.
  std::string name(bool lowercase) {
    std::string out;
    std::size_t wire_len = 1;
    std::size_t cur = pos_;
    bool jumped = false;
    int hops = 0;
    while (true) {
      if (cur >= buf_.size()) throw MalformedMessage("name truncated");
      const std::uint8_t len = buf_[cur];
      if ((len & 0xc0) == 0xc0) {
        if (cur + 1 >= buf_.size()) throw MalformedMessage("pointer truncated");
        const std::size_t target = static_cast<std::size_t>(((len & 0x3f) << 8) | buf_[cur + 1]);
        if (target >= cur) throw MalformedMessage("compression pointer does not point backwards");
        if (++hops > kMaxPointerHops) throw MalformedMessage("compression loop");
        if (!jumped) {
          pos_ = cur + 2;
          jumped = true;
        }
        cur = target;
        continue;
      }
      if ((len & 0xc0) != 0) throw MalformedMessage("unsupported label type");
      if (len == 0) {
        if (!jumped) pos_ = cur + 1;
        break;
      }
      if (cur + 1 + len > buf_.size()) throw MalformedMessage("label truncated");
      wire_len += 1u + len;
      if (wire_len > kMaxNameWire) throw MalformedMessage("name exceeds 255 octets");
      if (!out.empty()) out.push_back('.');
      for (std::size_t i = 0; i < len; ++i) {
        char c = static_cast<char>(buf_[cur + 1 + i]);
        if (c == '.') throw MalformedMessage("label contains a dot");
        if (lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
      }
      cur += 1u + len;
    }
    return out;
  }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v >> 16));
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
}

void append(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& b) {
  out.insert(out.end(), b.begin(), b.end());
}

// Names embedded in RDATA are rewritten uncompressed. Layout: fixed prefix
// bytes, then `names` domain names, then fixed suffix bytes.
struct RdataShape {
  std::size_t prefix;
  int names;
  std::size_t suffix;
};

std::optional<RdataShape> rdata_shape(std::uint16_t type) {
  switch (type) {
    case rtype::NS:
    case rtype::CNAME:
    case rtype::PTR:
    case rtype::DNAME:
      return RdataShape{0, 1, 0};
    case rtype::MX:
      return RdataShape{2, 1, 0};
    case rtype::SRV:
      return RdataShape{6, 1, 0};
    case rtype::SOA:
      return RdataShape{0, 2, 20};
    default:
      return std::nullopt;
  }
}

ResourceRecord read_record(Reader& r) {
  ResourceRecord rr;
  rr.name = r.name(true);
  rr.type = r.u16();
  rr.rclass = r.u16();
  rr.ttl = r.u32();
  const std::uint16_t rdlen = r.u16();
  r.need(rdlen);
  const std::size_t end = r.pos() + rdlen;
  if (const auto shape = rdata_shape(rr.type)) {
    rr.rdata = r.bytes(shape->prefix);
    for (int i = 0; i < shape->names; ++i) {
      if (r.pos() >= end) throw MalformedMessage("rdata name truncated");
      append(rr.rdata, encode_name(r.name(false)));
    }
    if (r.pos() + shape->suffix != end) throw MalformedMessage("rdata length mismatch");
    append(rr.rdata, r.bytes(shape->suffix));
  } else {
    rr.rdata = r.bytes(rdlen);
  }
  return rr;
}

class Writer {
 public:
  std::vector<std::uint8_t> out;

  void name(const std::string& name) {
    std::string_view rest = name;
    while (!rest.empty()) {
      if (auto it = offsets_.find(std::string(rest)); it != offsets_.end()) {
        put16(out, static_cast<std::uint16_t>(0xc000 | it->second));
        return;
      }
      if (out.size() < 0x3fff) offsets_.emplace(std::string(rest), out.size());
      const auto dot = rest.find('.');
      const auto label = rest.substr(0, dot);
      if (label.empty() || label.size() > 63) throw MalformedMessage("invalid label in '" + name + "'");
      out.push_back(static_cast<std::uint8_t>(label.size()));
      out.insert(out.end(), label.begin(), label.end());
      rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    }
    out.push_back(0);
  }

  void record(const ResourceRecord& rr) {
    name(rr.name);
    put16(out, rr.type);
    put16(out, rr.rclass);
    put32(out, rr.ttl);
    if (rr.rdata.size() > 0xffff) throw MalformedMessage("rdata too long");
    put16(out, static_cast<std::uint16_t>(rr.rdata.size()));
    append(out, rr.rdata);
  }

 private:
  std::unordered_map<std::string, std::size_t> offsets_;
};

}  // namespace

std::vector<std::uint8_t> encode_name(const std::string& name) {
  std::vector<std::uint8_t> out;
  std::string_view rest = name;
  while (!rest.empty()) {
    const auto dot = rest.find('.');
    const auto label = rest.substr(0, dot);
    if (label.empty() || label.size() > 63) throw MalformedMessage("invalid label in '" + name + "'");
    out.push_back(static_cast<std::uint8_t>(label.size()));
    out.insert(out.end(), label.begin(), label.end());
    rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  }
  out.push_back(0);
  if (out.size() > kMaxNameWire) throw MalformedMessage("name exceeds 255 octets");
  return out;
}

DnsMessage parse_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw MalformedMessage("shorter than header");
  Reader r(bytes);
  DnsMessage m;
  m.id = r.u16();
  m.flags = Flags::from_wire(r.u16());
  const std::uint16_t qd = r.u16();
  const std::uint16_t an = r.u16();
  const std::uint16_t ns = r.u16();
  const std::uint16_t ar = r.u16();

  m.questions.reserve(qd);
  for (int i = 0; i < qd; ++i) {
    Question q;
    q.qname = r.name(true);
    q.qtype = r.u16();
    q.qclass = r.u16();
    m.questions.push_back(std::move(q));
  }
  auto read_section = [&r](std::vector<ResourceRecord>& section, std::uint16_t count) {
    for (int i = 0; i < count; ++i) section.push_back(read_record(r));
  };
  read_section(m.answers, an);
  read_section(m.authorities, ns);
  read_section(m.additionals, ar);
  return m;
}

std::vector<std::uint8_t> serialize_message(const DnsMessage& m) {
  auto count = [](std::size_t n) {
    if (n > 0xffff) throw MalformedMessage("section too large");
    return static_cast<std::uint16_t>(n);
  };
  Writer w;
  w.out.reserve(512);
  put16(w.out, m.id);
  put16(w.out, m.flags.to_wire());
  put16(w.out, count(m.questions.size()));
  put16(w.out, count(m.answers.size()));
  put16(w.out, count(m.authorities.size()));
  put16(w.out, count(m.additionals.size()));
  for (const auto& q : m.questions) {
    w.name(q.qname);
    put16(w.out, q.qtype);
    put16(w.out, q.qclass);
  }
  for (const auto& rr : m.answers) w.record(rr);
  for (const auto& rr : m.authorities) w.record(rr);
  for (const auto& rr : m.additionals) w.record(rr);
  return std::move(w.out);
}

DnsMessage make_query(std::uint16_t id, std::string qname, std::uint16_t qtype) {
  DnsMessage m;
  m.id = id;
  m.flags.rd = true;
  m.questions.push_back(Question{std::move(qname), qtype, kClassIN});
  return m;
}

std::vector<std::uint8_t> ipv4_rdata(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
  return {a, b, c, d};
}

std::optional<std::uint16_t> peek_id(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) return std::nullopt;
  return static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
}

void patch_id(std::vector<std::uint8_t>& bytes, std::uint16_t id) {
  if (bytes.size() < 2) return;
  bytes[0] = static_cast<std::uint8_t>(id >> 8);
  bytes[1] = static_cast<std::uint8_t>(id & 0xff);
}

}  // namespace sinkhole::dns
