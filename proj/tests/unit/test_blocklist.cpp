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

#include <filesystem>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "sinkhole/blocklist/store.hpp"

using namespace sinkhole;
using namespace sinkhole::blocklist;
using namespace std::chrono;

namespace {

const Instant T0 = *parse_iso8601("2025-03-03T08:00:00Z");

std::string word(std::mt19937& rng, int min_len = 1, int max_len = 4) {
  std::uniform_int_distribution<int> len(min_len, max_len), ch(0, 3);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += static_cast<char>('a' + ch(rng));
  return s;
}

struct TempPath {
  std::filesystem::path path;
  explicit TempPath(const std::string& name) : path(std::filesystem::temp_directory_path() / name) { clean(); }
  ~TempPath() { clean(); }
  void clean() {
    for (const char* ext : {"", ".audit", ".tmp"}) std::filesystem::remove(path.string() + ext);
  }
};

}  // namespace

TEST_CASE("suffix matching agrees with a brute-force scan") {
  // Tiny alphabets force many shared suffixes and near misses.
  std::mt19937 rng(31337);
  ManualClock clock(T0);
  BlocklistStore store(clock);
  std::vector<oracle::Entry> model;
  struct Planned {
    EntryId id;
    std::string domain;
    std::optional<Window> window;
  };
  std::vector<Planned> planned;
  std::set<std::pair<std::string, std::string>> seen;
  std::uniform_int_distribution<int> labels(2, 4), coin(0, 3), offset(-10, 10), tagpick(0, 2);
  while (planned.size() < 600) {
    std::string d = word(rng);
    for (int i = labels(rng) - 1; i > 0; --i) d = word(rng) + "." + d;
    d += ".com";
    const std::string tag = "t" + std::to_string(tagpick(rng));
    if (!seen.insert({d, tag}).second) continue;
    std::optional<Window> w;
    if (coin(rng) != 0) {
      const auto s = T0 + minutes(offset(rng));
      w = Window{s, s + minutes(1 + coin(rng) * 5)};
    }
    const auto e = store.add_entry(d, tag, w, Source::Manual);
    planned.push_back({e.id, d, w});
  }
  std::vector<std::string> whitelist;
  for (int i = 0; i < 15; ++i) {
    const auto& d = planned[static_cast<std::size_t>(i * 37)].domain;
    const auto name = d.substr(d.find('.') + 1);
    store.whitelist_override(name);
    whitelist.push_back(name);
  }

  const auto snap = store.snapshot();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(planned.size()) - 1), probe(-12, 25);
  for (int round = 0; round < 20; ++round) {
    const Instant now = T0 + minutes(probe(rng));
    std::vector<oracle::Entry> entries;
    for (const auto& s : planned)
      entries.push_back({s.id, s.domain, !s.window || (s.window->start <= now && now < s.window->end)});
    for (int q = 0; q < 300; ++q) {
      std::string name;
      switch (coin(rng)) {
        case 0: name = planned[static_cast<std::size_t>(pick(rng))].domain; break;
        case 1: name = word(rng) + "." + planned[static_cast<std::size_t>(pick(rng))].domain; break;
        case 2: name = word(rng) + planned[static_cast<std::size_t>(pick(rng))].domain; break;
        default: name = word(rng) + "." + word(rng) + ".com"; break;
      }
      INFO(name);
      REQUIRE(snap->match(name, now) == oracle::suffix_match(entries, whitelist, name));
    }
  }
}

TEST_CASE("a window blocks exactly on [start, end)") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<long> ms(0, 100000);
  ManualClock clock(T0);
  BlocklistStore store(clock);
  for (int i = 0; i < 1000; ++i) {
    const auto a = T0 + milliseconds(ms(rng));
    const auto b = T0 + milliseconds(ms(rng));
    if (a == b) continue;
    const Window w{std::min(a, b), std::max(a, b)};
    const auto e = store.add_entry("w.example.com", "t", w, Source::Manual);
    for (const auto t : {w.start - milliseconds(1), w.start, w.end - milliseconds(1), w.end,
                         T0 + milliseconds(ms(rng))}) {
      const bool expected = w.start <= t && t < w.end;
      REQUIRE(store.is_blocked("w.example.com", t).has_value() == expected);
      REQUIRE(e.blocks_at(t) == expected);
    }
  }
}

TEST_CASE("invalid input is rejected") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  CHECK_THROWS_AS(store.add_entry("x.com", "t", Window{T0, T0}, Source::Manual), InvalidWindow);
  CHECK_THROWS_AS(store.add_entry("not a domain", "t", std::nullopt, Source::Manual), InvalidDomain);
  CHECK_THROWS_AS(store.add_entry("x.com", "", std::nullopt, Source::Manual), std::invalid_argument);
  CHECK_THROWS_AS(store.add_entry("x.com", "t", std::nullopt, Source::Classifier), std::invalid_argument);
  CHECK_THROWS_AS(store.add_entry("x.com", "t", std::nullopt, Source::Manual, "v-1"), std::invalid_argument);
  CHECK_THROWS_AS(store.set_tag_window("t", Window{T0 + hours(1), T0}), InvalidWindow);
  CHECK(store.snapshot()->entries().empty());
}

TEST_CASE("add_entry upserts on domain and tag") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  const auto a = store.add_entry("ChatGPT.com", "t", std::nullopt, Source::Manual);
  const auto b = store.add_entry("chatgpt.com", "t", Window{T0, T0 + hours(1)}, Source::Classifier, "v-9");
  const auto c = store.add_entry("chatgpt.com", "other", std::nullopt, Source::Manual);
  CHECK(a.id == b.id);
  CHECK(b.source == Source::Classifier);
  CHECK(b.verdict_id == "v-9");
  CHECK(c.id != a.id);
  CHECK(store.snapshot()->entries().size() == 2);
  CHECK(store.is_blocked("chatgpt.com", T0) == a.id);  // lowest id wins the tie
}

TEST_CASE("the most specific entry is reported") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  const auto parent = store.add_entry("openai.com", "t", std::nullopt, Source::Manual);
  const auto child = store.add_entry("chat.openai.com", "t", std::nullopt, Source::Manual);
  CHECK(store.is_blocked("x.chat.openai.com", T0) == child.id);
  CHECK(store.is_blocked("api.openai.com", T0) == parent.id);
  CHECK_FALSE(store.is_blocked("openai.com.evil.net", T0).has_value());
}

TEST_CASE("tag windows drive every entry under the tag") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  for (const char* d : {"a.com", "b.com", "c.com"}) store.add_entry(d, "exam", std::nullopt, Source::Manual);
  store.add_entry("keep.com", "other", std::nullopt, Source::Manual);
  const Window w{T0 + hours(4), T0 + hours(8)};

  CHECK(store.set_tag_window("exam", w) == 3);
  CHECK(store.snapshot()->tag_policy("exam").state == TagPolicy::State::Scheduled);
  CHECK_FALSE(store.is_blocked("a.com", T0).has_value());
  CHECK(store.is_blocked("a.com", T0 + hours(5)).has_value());
  CHECK(store.is_blocked("keep.com", T0).has_value());

  // Entries added later adopt the scheduled window.
  const auto late = store.add_entry("d.com", "exam", std::nullopt, Source::Manual);
  CHECK(late.active_window == w);

  CHECK(store.set_tag_window("exam", std::nullopt) == 4);
  CHECK(store.snapshot()->tag_policy("exam").state == TagPolicy::State::Disabled);
  CHECK_FALSE(store.is_blocked("a.com", T0 + hours(5)).has_value());
  CHECK_FALSE(store.add_entry("e.com", "exam", std::nullopt, Source::Manual).active);
  CHECK(store.snapshot()->entries().size() == 6);

  CHECK(store.set_tag_window("exam", w) == 5);
  CHECK(store.snapshot()->active_count(T0 + hours(5)) == 6);
}

TEST_CASE("expire_sweep deactivates ended windows only") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  store.add_entry("old.com", "t", Window{T0, T0 + hours(1)}, Source::Manual);
  store.add_entry("new.com", "t", Window{T0, T0 + hours(3)}, Source::Manual);
  store.add_entry("always.com", "t", std::nullopt, Source::Manual);
  CHECK(store.expire_sweep(T0 + hours(1) - milliseconds(1)) == 0);
  CHECK(store.expire_sweep(T0 + hours(1)) == 1);
  CHECK(store.expire_sweep(T0 + hours(1)) == 0);
  std::size_t active = 0;
  for (const auto& e : store.snapshot()->entries()) active += e.active;
  CHECK(active == 2);
}

TEST_CASE("whitelist covers subdomains and can be lifted") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  store.add_entry("mail.google.com", "t", std::nullopt, Source::Manual);
  const auto w = store.whitelist_override("google.com", "exam portal login");
  CHECK(w.created_at == T0);
  CHECK_FALSE(store.is_blocked("mail.google.com", T0).has_value());
  CHECK(store.snapshot()->whitelisted("a.mail.google.com") != nullptr);
  CHECK(store.remove_whitelist("google.com"));
  CHECK_FALSE(store.remove_whitelist("google.com"));
  CHECK(store.is_blocked("mail.google.com", T0).has_value());
}

TEST_CASE("snapshots are immutable once taken") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  const auto before = store.snapshot();
  store.add_entry("chatgpt.com", "t", std::nullopt, Source::Manual);
  CHECK(before->entries().empty());
  CHECK(store.snapshot()->entries().size() == 1);
}

TEST_CASE("subscription export and import round-trip") {
  ManualClock clock(T0);
  BlocklistStore a(clock);
  const auto fixture = oracle::read_text(oracle::fixture("ai-sinkhole.txt"));
  CHECK(a.import_list(fixture, std::string(kAiSinkholeTag)) == 63);
  const auto exported = a.export_list(kAiSinkholeTag, T0, *parse_iso8601("2025-03-03T08:00:00Z"));
  CHECK(exported == fixture);

  BlocklistStore b(clock);
  b.import_list(exported, kAiSinkholeTag);
  CHECK(b.export_list(kAiSinkholeTag, T0) == a.export_list(kAiSinkholeTag, T0));
  CHECK(parse_list_document(exported).size() == 63);
}

TEST_CASE("export lists only entries blocking now, sorted and deduplicated") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  store.add_entry("zeta.ai", "t", std::nullopt, Source::Manual);
  store.add_entry("alpha.ai", "t", std::nullopt, Source::Manual);
  store.add_entry("later.ai", "t", Window{T0 + hours(1), T0 + hours(2)}, Source::Manual);
  store.add_entry("elsewhere.ai", "u", std::nullopt, Source::Manual);
  CHECK(store.export_list("t", T0) ==
        "# tag: t\n# generated: 2025-03-03T08:00:00.000Z\n# entries: 2\nalpha.ai\nzeta.ai\n");
}

TEST_CASE("import deactivates absent entries and reactivates listed ones") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  store.import_list("a.com\nb.com\n", "sub");
  CHECK(store.import_list("# comment\n\nb.com\r\nc.com\n", "sub") == 1);
  CHECK_FALSE(store.is_blocked("a.com", T0).has_value());
  CHECK(store.is_blocked("b.com", T0).has_value());
  CHECK(store.is_blocked("c.com", T0).has_value());
  CHECK(store.import_list("a.com\n", "sub") == 0);
  CHECK(store.is_blocked("a.com", T0).has_value());
  CHECK(store.snapshot()->entries().size() == 3);
}

TEST_CASE("a bad line rejects the whole import") {
  ManualClock clock(T0);
  BlocklistStore store(clock);
  store.import_list("a.com\n", "sub");
  try {
    store.import_list("b.com\nhttps://c.com/\nd.com\n", "sub");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK(store.snapshot()->entries().size() == 1);
  CHECK(store.is_blocked("a.com", T0).has_value());
  CHECK_THROWS_AS(parse_list_document("UPPER.com\n"), ParseError);
  CHECK_THROWS_AS(parse_list_document("0.0.0.0 ads.com\n"), ParseError);
}

TEST_CASE("state persists across restarts with an audit trail") {
  TempPath tmp("sinkhole_store_test.jsonl");
  ManualClock clock(T0);
  {
    BlocklistStore store(clock, tmp.path);
    store.add_entry("chatgpt.com", "AI-sinkhole", std::nullopt, Source::Classifier, "v-abc");
    store.add_entry("claude.ai", "AI-sinkhole", std::nullopt, Source::Manual);
    store.set_tag_window("AI-sinkhole", Window{T0 + hours(1), T0 + hours(2)});
    store.whitelist_override("docs.claude.ai", "allowed");
    CHECK(store.audit_log().size() == 4);
  }
  BlocklistStore again(clock, tmp.path);
  const auto snap = again.snapshot();
  REQUIRE(snap->entries().size() == 2);
  CHECK(snap->entries()[0].verdict_id == "v-abc");
  CHECK(snap->entries()[0].active_window == Window{T0 + hours(1), T0 + hours(2)});
  CHECK(snap->whitelist().size() == 1);
  CHECK(snap->tag_policy("AI-sinkhole").state == TagPolicy::State::Scheduled);
  const auto next = again.add_entry("poe.com", "AI-sinkhole", std::nullopt, Source::Manual);
  CHECK(next.id == 3);
  CHECK(next.active_window == Window{T0 + hours(1), T0 + hours(2)});

  const auto audit = oracle::read_text(tmp.path.string() + ".audit");
  CHECK(std::count(audit.begin(), audit.end(), '\n') == 5);
}

TEST_CASE("entry JSON round-trips") {
  BlockEntry e{7, "chatgpt.com", "AI-sinkhole", T0, Window{T0, T0 + hours(4)}, Source::Classifier, "v-1", false};
  CHECK(block_entry_from_json(to_json(e)) == e);
  WhitelistEntry w{"google.com", "why", T0};
  CHECK(whitelist_entry_from_json(to_json(w)) == w);
  for (auto s : {Source::Manual, Source::Classifier, Source::Subscription})
    CHECK(source_from_string(to_string(s)) == s);
}
