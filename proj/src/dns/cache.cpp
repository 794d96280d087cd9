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

#include "sinkhole/dns/cache.hpp"

namespace sinkhole::dns {

std::optional<std::vector<std::uint8_t>> ResponseCache::get(const std::string& qname, std::uint16_t qtype,
                                                            Instant now) {
  std::lock_guard lock(mu_);
  auto it = index_.find(Key{qname, qtype});
  if (it == index_.end()) return std::nullopt;
  if (it->second->expires_at <= now) {
    lru_.erase(it->second);
    index_.erase(it);
    return std::nullopt;
  }
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->wire;
}

void ResponseCache::put(const std::string& qname, std::uint16_t qtype, std::vector<std::uint8_t> wire,
                        Instant expires_at) {
  if (max_entries_ == 0) return;
  std::lock_guard lock(mu_);
  Key key{qname, qtype};
  if (auto it = index_.find(key); it != index_.end()) {
    lru_.erase(it->second);
    index_.erase(it);
  }
  lru_.push_front(Slot{key, std::move(wire), expires_at});
  index_.emplace(std::move(key), lru_.begin());
  while (lru_.size() > max_entries_) {
    index_.erase(lru_.back().key);
    lru_.pop_back();
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return lru_.size();
}

void ResponseCache::clear() {
  std::lock_guard lock(mu_);
  lru_.clear();
  index_.clear();
}

}  // namespace sinkhole::dns
