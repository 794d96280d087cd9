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

#include <random>

#include "catch_amalgamated.hpp"
#include "sinkhole/common/domain.hpp"
#include "sinkhole/common/hash.hpp"
#include "sinkhole/common/time.hpp"

using namespace sinkhole;
using namespace std::chrono;

TEST_CASE("canonicalize_domain reduces URLs and user input to a bare host") {
  CHECK(canonicalize_domain("https://ChatGPT.com:443/c/x?y=1") == "chatgpt.com");
  CHECK(canonicalize_domain("poe.com.") == "poe.com");
  CHECK(canonicalize_domain("  chat.mistral.ai  ") == "chat.mistral.ai");
  CHECK(canonicalize_domain("user@claude.ai/path") == "claude.ai");
  CHECK(canonicalize_domain("_dmarc.example.org") == "_dmarc.example.org");
}

TEST_CASE("canonicalize_domain rejects non-names") {
  for (const char* bad : {"", "localhost", "10.0.0.1", "a..b.com", "-a.com", "a-.com", "exa mple.com",
                          "host.com:port", "ünïcode.com"}) {
    INFO(bad);
    CHECK_FALSE(canonicalize_domain(bad).has_value());
  }
  CHECK_FALSE(canonicalize_domain(std::string(64, 'a') + ".com").has_value());
  CHECK(canonicalize_domain(std::string(63, 'a') + ".com").has_value());
  CHECK_THROWS_AS(require_domain("nope"), InvalidDomain);
}

TEST_CASE("name length limit is 253 octets") {
  std::string name;
  while (name.size() < 249) name += "abcdefghi.";
  name += "com";  // 253 octets
  REQUIRE(name.size() == 253);
  CHECK(is_valid_dns_name(name));
  CHECK_FALSE(is_valid_dns_name("a" + name));
}

TEST_CASE("host_of_url needs a scheme") {
  CHECK(host_of_url("https://www.Example.com/a") == "www.example.com");
  CHECK(host_of_url("example.com") == "");
}

TEST_CASE("subdomain relation respects label boundaries") {
  CHECK(is_same_or_subdomain("chatgpt.com", "chatgpt.com"));
  CHECK(is_same_or_subdomain("cdn.chatgpt.com", "chatgpt.com"));
  CHECK_FALSE(is_same_or_subdomain("notchatgpt.com", "chatgpt.com"));
  CHECK_FALSE(is_same_or_subdomain("com", "chatgpt.com"));
  const auto s = label_suffixes("a.b.c");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == "a.b.c");
  CHECK(s[1] == "b.c");
  CHECK(s[2] == "c");
}

TEST_CASE("ISO-8601 formatting round-trips at millisecond resolution") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> ms(0, 4'102'444'800'000LL);
  for (int i = 0; i < 1000; ++i) {
    Instant t{Millis{ms(rng)}};
    const auto text = format_iso8601(t);
    REQUIRE(text.size() == 24);
    REQUIRE(parse_iso8601(text) == t);
  }
  CHECK(format_iso8601(Instant{}) == "1970-01-01T00:00:00.000Z");
  CHECK(parse_iso8601("2025-03-01T10:00:00+02:00") == parse_iso8601("2025-03-01T08:00:00Z"));
  CHECK(parse_iso8601("2025-03-01T08:00:00") == parse_iso8601("2025-03-01T08:00:00.000Z"));
  for (const char* bad : {"", "2025-03-01", "2025-13-01T00:00:00Z", "2025-03-01T25:00:00Z", "yesterday",
                          "2025-03-01T08:00:00Zjunk"}) {
    INFO(bad);
    CHECK_FALSE(parse_iso8601(bad).has_value());
  }
}

TEST_CASE("windows are half-open") {
  const Instant t0{Millis{1000}};
  Window w{t0, t0 + seconds(10)};
  CHECK(w.contains(t0));
  CHECK(w.contains(t0 + seconds(10) - Millis(1)));
  CHECK_FALSE(w.contains(t0 + seconds(10)));
  CHECK_FALSE(w.contains(t0 - Millis(1)));
  CHECK(w.valid());
  CHECK_FALSE((Window{t0, t0}).valid());
}

TEST_CASE("manual clock moves only when told") {
  ManualClock c(Instant{Millis{5}});
  CHECK(c.now() == Instant{Millis{5}});
  c.advance(Millis{10});
  CHECK(c.now() == Instant{Millis{15}});
  c.set(Instant{Millis{1}});
  CHECK(c.now() == Instant{Millis{1}});
}

TEST_CASE("hashing matches known vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hmac_sha256_hex("key", "The quick brown fox jumps over the lazy dog") ==
        "f7bc83f430538424b13298e6aa6fb143ef4d59a14946175997479dbc2d1a3cd8");
  const auto a = random_hex_token();
  CHECK(a.size() == 64);
  CHECK(a != random_hex_token());
}
