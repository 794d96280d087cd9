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

#include "sinkhole/blocklist/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sinkhole::blocklist {

using nlohmann::json;

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Manual:
      return "manual";
    case Source::Classifier:
      return "classifier";
    case Source::Subscription:
      return "subscription";
  }
  return "manual";
}

std::optional<Source> source_from_string(std::string_view s) {
  if (s == "manual") return Source::Manual;
  if (s == "classifier") return Source::Classifier;
  if (s == "subscription") return Source::Subscription;
  return std::nullopt;
}

namespace {

json window_json(const std::optional<Window>& w) {
  if (!w) return nullptr;
  return json{{"start", format_iso8601(w->start)}, {"end", format_iso8601(w->end)}};
}

Instant instant_field(const json& j, const char* key) {
  auto t = parse_iso8601(j.at(key).get<std::string>());
  if (!t) throw std::runtime_error(std::string("bad timestamp in field ") + key);
  return *t;
}

std::optional<Window> window_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return Window{instant_field(j, "start"), instant_field(j, "end")};
}

std::string_view to_string(TagPolicy::State s) {
  switch (s) {
    case TagPolicy::State::Scheduled:
      return "scheduled";
    case TagPolicy::State::Disabled:
      return "disabled";
    case TagPolicy::State::Unset:
      break;
  }
  return "unset";
}

}  // namespace

json to_json(const BlockEntry& e) {
  return json{{"id", e.id},
              {"domain", e.domain},
              {"tag", e.tag},
              {"added_at", format_iso8601(e.added_at)},
              {"active_window", window_json(e.active_window)},
              {"source", to_string(e.source)},
              {"verdict_id", e.verdict_id ? json(*e.verdict_id) : json(nullptr)},
              {"active", e.active}};
}

BlockEntry block_entry_from_json(const json& j) {
  BlockEntry e;
  e.id = j.at("id").get<EntryId>();
  e.domain = j.at("domain").get<std::string>();
  e.tag = j.at("tag").get<std::string>();
  e.added_at = instant_field(j, "added_at");
  e.active_window = window_from_json(j.value("active_window", json(nullptr)));
  const auto src = source_from_string(j.at("source").get<std::string>());
  if (!src) throw std::runtime_error("unknown source");
  e.source = *src;
  if (j.contains("verdict_id") && !j["verdict_id"].is_null()) e.verdict_id = j["verdict_id"].get<std::string>();
  e.active = j.value("active", true);
  return e;
}

json to_json(const WhitelistEntry& e) {
  return json{{"domain", e.domain}, {"reason", e.reason}, {"created_at", format_iso8601(e.created_at)}};
}

WhitelistEntry whitelist_entry_from_json(const json& j) {
  return WhitelistEntry{j.at("domain").get<std::string>(), j.value("reason", std::string{}),
                        instant_field(j, "created_at")};
}

// ---------------------------------------------------------------------------

Snapshot::Snapshot(std::vector<BlockEntry> entries, std::vector<WhitelistEntry> whitelist,
                   std::map<std::string, TagPolicy, std::less<>> tags)
    : entries_(std::move(entries)), whitelist_(std::move(whitelist)), tags_(std::move(tags)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    by_domain_[entries_[i].domain].push_back(i);
    by_id_.emplace(entries_[i].id, i);
  }
  for (std::size_t i = 0; i < whitelist_.size(); ++i) whitelist_index_.emplace(whitelist_[i].domain, i);
}

const WhitelistEntry* Snapshot::whitelisted(std::string_view qname) const {
  for (auto suffix : label_suffixes(qname)) {
    if (auto it = whitelist_index_.find(std::string(suffix)); it != whitelist_index_.end()) {
      return &whitelist_[it->second];
    }
  }
  return nullptr;
}

std::optional<EntryId> Snapshot::match(std::string_view qname, Instant now) const {
  if (whitelisted(qname)) return std::nullopt;
  for (auto suffix : label_suffixes(qname)) {
    auto it = by_domain_.find(std::string(suffix));
    if (it == by_domain_.end()) continue;
    std::optional<EntryId> best;
    for (std::size_t idx : it->second) {
      const auto& e = entries_[idx];
      if (e.blocks_at(now) && (!best || e.id < *best)) best = e.id;
    }
    if (best) return best;
  }
  return std::nullopt;
}

const BlockEntry* Snapshot::find(EntryId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::size_t Snapshot::active_count(Instant now) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [now](const BlockEntry& e) { return e.blocks_at(now); }));
}

TagPolicy Snapshot::tag_policy(std::string_view tag) const {
  auto it = tags_.find(tag);
  return it == tags_.end() ? TagPolicy{} : it->second;
}

// ---------------------------------------------------------------------------

BlocklistStore::BlocklistStore(const Clock& clock, std::optional<std::filesystem::path> path)
    : clock_(clock), path_(std::move(path)) {
  std::lock_guard lock(write_mu_);
  if (path_ && std::filesystem::exists(*path_)) load();
  publish_locked();
}

void BlocklistStore::apply_tag_policy_locked(BlockEntry& e, const std::optional<Window>& explicit_window) const {
  const auto it = tags_.find(e.tag);
  const TagPolicy policy = it == tags_.end() ? TagPolicy{} : it->second;
  if (explicit_window) {
    e.active_window = explicit_window;
    e.active = true;
    return;
  }
  switch (policy.state) {
    case TagPolicy::State::Unset:
      e.active_window.reset();
      e.active = true;
      break;
    case TagPolicy::State::Scheduled:
      e.active_window = policy.window;
      e.active = true;
      break;
    case TagPolicy::State::Disabled:
      e.active_window.reset();
      e.active = false;
      break;
  }
}

BlockEntry BlocklistStore::add_entry(std::string_view domain, std::string_view tag, std::optional<Window> window,
                                     Source source, std::optional<std::string> verdict_id) {
  std::string canonical = require_domain(domain);
  if (window && !window->valid()) throw InvalidWindow();
  if (tag.empty()) throw std::invalid_argument("tag must not be empty");
  if ((source == Source::Classifier) != verdict_id.has_value()) {
    throw std::invalid_argument("verdict_id must be present exactly for classifier entries");
  }

  std::lock_guard lock(write_mu_);
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const BlockEntry& e) { return e.domain == canonical && e.tag == tag; });
  BlockEntry* entry;
  if (it == entries_.end()) {
    BlockEntry e;
    e.id = next_id_++;
    e.domain = canonical;
    e.tag = std::string(tag);
    e.added_at = clock_.now();
    entries_.push_back(std::move(e));
    entry = &entries_.back();
  } else {
    entry = &*it;
  }
  entry->source = source;
  entry->verdict_id = std::move(verdict_id);
  apply_tag_policy_locked(*entry, window);
  BlockEntry result = *entry;
  audit_locked("add", canonical, std::string(tag));
  publish_locked();
  persist_locked();
  return result;
}

std::optional<EntryId> BlocklistStore::is_blocked(std::string_view qname, Instant now) const {
  return snapshot()->match(qname, now);
}

std::size_t BlocklistStore::set_tag_window(std::string_view tag, std::optional<Window> window) {
  if (window && !window->valid()) throw InvalidWindow();
  std::lock_guard lock(write_mu_);
  auto& policy = tags_[std::string(tag)];
  policy = window ? TagPolicy{TagPolicy::State::Scheduled, window} : TagPolicy{TagPolicy::State::Disabled, {}};
  std::size_t affected = 0;
  for (auto& e : entries_) {
    if (e.tag != tag) continue;
    apply_tag_policy_locked(e, std::nullopt);
    ++affected;
  }
  audit_locked(window ? "window" : "disable", "",
               std::string(tag) + (window ? " " + format_iso8601(window->start) + "/" + format_iso8601(window->end) : ""));
  publish_locked();
  persist_locked();
  return affected;
}

std::size_t BlocklistStore::expire_sweep(Instant now) {
  std::lock_guard lock(write_mu_);
  std::size_t count = 0;
  for (auto& e : entries_) {
    if (e.active && e.active_window && e.active_window->end <= now) {
      e.active = false;
      ++count;
    }
  }
  if (count > 0) {
    audit_locked("expire", "", std::to_string(count) + " entries");
    publish_locked();
    persist_locked();
  }
  return count;
}

std::string BlocklistStore::export_list(std::string_view tag, Instant now) const {
  return export_list(tag, now, now);
}

std::string BlocklistStore::export_list(std::string_view tag, Instant now, Instant generated_at) const {
  const auto snap = snapshot();
  std::vector<std::string> domains;
  for (const auto& e : snap->entries()) {
    if (e.tag == tag && e.blocks_at(now)) domains.push_back(e.domain);
  }
  std::sort(domains.begin(), domains.end());
  domains.erase(std::unique(domains.begin(), domains.end()), domains.end());

  std::string out;
  out += "# tag: " + std::string(tag) + "\n";
  out += "# generated: " + format_iso8601(generated_at) + "\n";
  out += "# entries: " + std::to_string(domains.size()) + "\n";
  for (const auto& d : domains) {
    out += d;
    out += '\n';
  }
  return out;
}

std::vector<std::string> parse_list_document(std::string_view text) {
  std::vector<std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto canonical = canonicalize_domain(trimmed);
    if (!canonical || *canonical != trimmed) {
      throw ParseError(line_no, "not a bare domain: '" + std::string(trimmed) + "'");
    }
    out.push_back(*canonical);
  }
  return out;
}

std::size_t BlocklistStore::import_list(std::string_view text, std::string_view tag) {
  const auto domains = parse_list_document(text);
  const std::unordered_set<std::string> listed(domains.begin(), domains.end());

  std::lock_guard lock(write_mu_);
  std::size_t added = 0;
  std::unordered_set<std::string> present;
  for (auto& e : entries_) {
    if (e.tag != tag) continue;
    if (listed.contains(e.domain)) {
      present.insert(e.domain);
      if (!e.active) apply_tag_policy_locked(e, e.active_window);
    } else {
      e.active = false;
    }
  }
  for (const auto& d : domains) {
    if (present.contains(d)) continue;
    present.insert(d);
    BlockEntry e;
    e.id = next_id_++;
    e.domain = d;
    e.tag = std::string(tag);
    e.added_at = clock_.now();
    e.source = Source::Subscription;
    apply_tag_policy_locked(e, std::nullopt);
    entries_.push_back(std::move(e));
    ++added;
  }
  audit_locked("import", "", std::string(tag) + " +" + std::to_string(added));
  publish_locked();
  persist_locked();
  return added;
}

WhitelistEntry BlocklistStore::whitelist_override(std::string_view domain, std::string reason) {
  std::string canonical = require_domain(domain);
  std::lock_guard lock(write_mu_);
  auto it = std::find_if(whitelist_.begin(), whitelist_.end(),
                         [&](const WhitelistEntry& w) { return w.domain == canonical; });
  if (it == whitelist_.end()) {
    whitelist_.push_back(WhitelistEntry{canonical, std::move(reason), clock_.now()});
    it = whitelist_.end() - 1;
  } else if (!reason.empty()) {
    it->reason = std::move(reason);
  }
  WhitelistEntry result = *it;
  audit_locked("whitelist", canonical, result.reason);
  publish_locked();
  persist_locked();
  return result;
}

bool BlocklistStore::remove_whitelist(std::string_view domain) {
  std::string canonical = require_domain(domain);
  std::lock_guard lock(write_mu_);
  const auto before = whitelist_.size();
  std::erase_if(whitelist_, [&](const WhitelistEntry& w) { return w.domain == canonical; });
  const bool removed = whitelist_.size() != before;
  if (removed) {
    audit_locked("unwhitelist", canonical, "");
    publish_locked();
    persist_locked();
  }
  return removed;
}

std::shared_ptr<const Snapshot> BlocklistStore::snapshot() const {
  std::lock_guard lock(snap_mu_);
  return snapshot_;
}

std::vector<AuditRecord> BlocklistStore::audit_log() const {
  std::lock_guard lock(write_mu_);
  return audit_;
}

void BlocklistStore::publish_locked() {
  auto next = std::make_shared<const Snapshot>(entries_, whitelist_, tags_);
  std::lock_guard lock(snap_mu_);
  snapshot_ = std::move(next);
}

void BlocklistStore::audit_locked(std::string action, std::string domain, std::string detail) {
  AuditRecord rec{clock_.now(), std::move(action), std::move(domain), std::move(detail)};
  if (path_) {
    auto audit_path = *path_;
    audit_path += ".audit";
    std::ofstream out(audit_path, std::ios::app);
    out << json{{"at", format_iso8601(rec.at)}, {"action", rec.action}, {"domain", rec.domain}, {"detail", rec.detail}}
               .dump()
        << '\n';
  }
  audit_.push_back(std::move(rec));
}

void BlocklistStore::persist_locked() const {
  if (!path_) return;
  auto tmp = *path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    for (const auto& [tag, policy] : tags_) {
      out << json{{"type", "tag"}, {"tag", tag}, {"state", to_string(policy.state)}, {"window", window_json(policy.window)}}
                 .dump()
          << '\n';
    }
    for (const auto& e : entries_) {
      auto j = to_json(e);
      j["type"] = "block";
      out << j.dump() << '\n';
    }
    for (const auto& w : whitelist_) {
      auto j = to_json(w);
      j["type"] = "whitelist";
      out << j.dump() << '\n';
    }
  }
  std::filesystem::rename(tmp, *path_);
}

void BlocklistStore::load() {
  std::ifstream in(*path_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "block") {
        auto e = block_entry_from_json(j);
        next_id_ = std::max(next_id_, e.id + 1);
        entries_.push_back(std::move(e));
      } else if (type == "whitelist") {
        whitelist_.push_back(whitelist_entry_from_json(j));
      } else if (type == "tag") {
        TagPolicy p;
        const auto state = j.at("state").get<std::string>();
        p.state = state == "scheduled"  ? TagPolicy::State::Scheduled
                  : state == "disabled" ? TagPolicy::State::Disabled
                                        : TagPolicy::State::Unset;
        p.window = window_from_json(j.value("window", json(nullptr)));
        tags_[j.at("tag").get<std::string>()] = p;
      }
    } catch (const std::exception& ex) {
      throw std::runtime_error(path_->string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
}

}  // namespace sinkhole::blocklist
