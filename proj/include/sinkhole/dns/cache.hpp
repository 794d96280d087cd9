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
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sinkhole/common/time.hpp"

namespace sinkhole::dns {

/// LRU cache of upstream answers keyed by (qname, qtype). Stores raw wire
/// bytes; callers patch the transaction id on the way out.
class ResponseCache {
 public:
  explicit ResponseCache(std::size_t max_entries) : max_entries_(max_entries) {}

  std::optional<std::vector<std::uint8_t>> get(const std::string& qname, std::uint16_t qtype, Instant now);
  void put(const std::string& qname, std::uint16_t qtype, std::vector<std::uint8_t> wire, Instant expires_at);
  std::size_t size() const;
  void clear();

 private:
  struct Key {
    std::string qname;
    std::uint16_t qtype;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::string>{}(k.qname) ^ (static_cast<std::size_t>(k.qtype) * 0x9e3779b97f4a7c15ull);
    }
  };
  struct Slot {
    Key key;
    std::vector<std::uint8_t> wire;
    Instant expires_at;
  };

  std::size_t max_entries_;
  mutable std::mutex mu_;
  std::list<Slot> lru_;  // front = most recently used
  std::unordered_map<Key, std::list<Slot>::iterator, KeyHash> index_;
};

}  // namespace sinkhole::dns
