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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "sinkhole/common/domain.hpp"
#include "sinkhole/common/time.hpp"

namespace sinkhole::blocklist {

inline constexpr std::string_view kAiSinkholeTag = "AI-sinkhole";

using EntryId = std::uint64_t;

enum class Source { Manual, Classifier, Subscription };

std::string_view to_string(Source s);
std::optional<Source> source_from_string(std::string_view s);

class InvalidWindow : public std::invalid_argument {
 public:
  InvalidWindow() : std::invalid_argument("window start must precede end") {}
};

/// Malformed line in an imported list. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct BlockEntry {
  EntryId id = 0;
  std::string domain;
  std::string tag;
  Instant added_at{};
  std::optional<Window> active_window;
  Source source = Source::Manual;
  std::optional<std::string> verdict_id;
  /// Cleared by expiry, subscription drops and tag disable. Inactive entries
  /// are retained so a later window can re-enable them.
  bool active = true;

  bool blocks_at(Instant t) const { return active && (!active_window || active_window->contains(t)); }
  friend bool operator==(const BlockEntry&, const BlockEntry&) = default;
};

struct WhitelistEntry {
  std::string domain;
  std::string reason;
  Instant created_at{};
  friend bool operator==(const WhitelistEntry&, const WhitelistEntry&) = default;
};

struct AuditRecord {
  Instant at{};
  std::string action;
  std::string domain;
  std::string detail;
};

/// What a tag does to entries added under it later.
struct TagPolicy {
  enum class State { Unset, Scheduled, Disabled };
  State state = State::Unset;
  std::optional<Window> window;
  friend bool operator==(const TagPolicy&, const TagPolicy&) = default;
};

nlohmann::json to_json(const BlockEntry& e);
BlockEntry block_entry_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WhitelistEntry& e);
WhitelistEntry whitelist_entry_from_json(const nlohmann::json& j);

/// Immutable view of the list used by resolver workers.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(std::vector<BlockEntry> entries, std::vector<WhitelistEntry> whitelist,
           std::map<std::string, TagPolicy, std::less<>> tags);

  /// Most specific active entry covering `qname` at `now`, unless a whitelist
  /// entry covers it. Ties on the same domain go to the lowest id.
  std::optional<EntryId> match(std::string_view qname, Instant now) const;

  /// Whitelist entry covering `qname` (exact or parent), if any.
  const WhitelistEntry* whitelisted(std::string_view qname) const;

  const BlockEntry* find(EntryId id) const;
  const std::vector<BlockEntry>& entries() const { return entries_; }
  const std::vector<WhitelistEntry>& whitelist() const { return whitelist_; }
  std::size_t active_count(Instant now) const;
  TagPolicy tag_policy(std::string_view tag) const;

 private:
  std::vector<BlockEntry> entries_;
  std::vector<WhitelistEntry> whitelist_;
  std::map<std::string, TagPolicy, std::less<>> tags_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_domain_;
  std::unordered_map<std::string, std::size_t> whitelist_index_;
  std::unordered_map<EntryId, std::size_t> by_id_;
};

/// Single-writer store of tagged block entries and whitelist overrides.
/// Readers take snapshots; every mutation publishes a fresh one after the
/// write completes. When constructed with a path the state is loaded from and
/// saved to a JSON-lines file.
class BlocklistStore {
 public:
  explicit BlocklistStore(const Clock& clock, std::optional<std::filesystem::path> path = std::nullopt);

  BlocklistStore(const BlocklistStore&) = delete;
  BlocklistStore& operator=(const BlocklistStore&) = delete;

  /// Upserts on (domain, tag). A missing window adopts the tag's scheduled
  /// window; a disabled tag yields an inactive entry.
  BlockEntry add_entry(std::string_view domain, std::string_view tag, std::optional<Window> window,
                       Source source, std::optional<std::string> verdict_id = std::nullopt);

  std::optional<EntryId> is_blocked(std::string_view qname, Instant now) const;

  /// Applies `window` to every entry under `tag`; nullopt disables the tag.
  std::size_t set_tag_window(std::string_view tag, std::optional<Window> window);

  /// Deactivates entries whose window ended at or before `now`.
  std::size_t expire_sweep(Instant now);

  /// Subscription document of the entries under `tag` that block at `now`.
  std::string export_list(std::string_view tag, Instant now) const;
  /// Same entries, but the "# generated:" header carries `generated_at`.
  std::string export_list(std::string_view tag, Instant now, Instant generated_at) const;

  /// Applies a subscription document for `tag`. All lines are validated
  /// before anything changes. Returns the number of newly created entries.
  std::size_t import_list(std::string_view text, std::string_view tag);

  WhitelistEntry whitelist_override(std::string_view domain, std::string reason = {});
  bool remove_whitelist(std::string_view domain);

  std::shared_ptr<const Snapshot> snapshot() const;
  std::vector<AuditRecord> audit_log() const;

 private:
  void publish_locked();
  void persist_locked() const;
  void load();
  void audit_locked(std::string action, std::string domain, std::string detail);
  void apply_tag_policy_locked(BlockEntry& e, const std::optional<Window>& explicit_window) const;

  const Clock& clock_;
  std::optional<std::filesystem::path> path_;

  mutable std::mutex write_mu_;
  std::vector<BlockEntry> entries_;
  std::vector<WhitelistEntry> whitelist_;
  std::map<std::string, TagPolicy, std::less<>> tags_;
  std::vector<AuditRecord> audit_;
  EntryId next_id_ = 1;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snapshot_;
};

/// Parses a subscription document into its domain lines. Throws ParseError.
std::vector<std::string> parse_list_document(std::string_view text);

}  // namespace sinkhole::blocklist
