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
#include <fstream>

#include "catch_amalgamated.hpp"
#include "sinkhole/config.hpp"

using namespace sinkhole;
using nlohmann::json;

TEST_CASE("defaults without any keys") {
  const auto c = parse_config(json::object());
  CHECK(c.dns.listen == "127.0.0.1:5353");
  CHECK(c.dns.sinkhole_ttl_secs == 2);
  CHECK(c.api.listen == "127.0.0.1:8053");
  CHECK(c.api.max_page_size == 500);
  CHECK(c.llm.temperature == 0.0);
  CHECK(c.llm.max_retries == 2);
  CHECK(c.policy.auto_block_on_yes);
  CHECK(c.policy.tag == "AI-sinkhole");
  CHECK(c.crawl.per_host_interval() == std::chrono::milliseconds(2000));
  CHECK(c.resolver_config().sinkhole_ttl_secs == 2);
}

TEST_CASE("the shipped example config loads") {
  const auto path = std::filesystem::path(SINKHOLE_FIXTURES_DIR) / "../../config/sinkhole.example.json";
  const auto c = load_config(path);
  CHECK(c.llm.model_id == "llama3:8b-instruct-q4_K_M");
  CHECK(c.dns.listen == "0.0.0.0:53");
  REQUIRE(c.blocklist_path.has_value());
  CHECK(c.blocklist_path->filename() == "blocklist.jsonl");
  CHECK(c.blocklist_path->parent_path().parent_path() == path.parent_path());
  REQUIRE(c.crawl.seed_lists.size() == 1);
  CHECK(c.upstream_config().address == "1.1.1.1:53");
}

TEST_CASE("unknown keys and wrong types are rejected") {
  CHECK_THROWS_AS(parse_config(json{{"dsn", json::object()}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"dns", {{"lisen", "x"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"dns", {{"workers", "four"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"dns", {{"workers", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"llm", {{"timeout_ms", -5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"llm", {{"max_retries", -1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"api", {{"max_page_size", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"discovery", {{"min_query_count", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/sinkhole.json"), ConfigError);
}

TEST_CASE("criteria file replaces the default criteria") {
  const auto dir = std::filesystem::temp_directory_path() / "sinkhole_config_test";
  std::filesystem::create_directories(dir);
  { std::ofstream(dir / "criteria.txt") << "Only count sites that host a chat box."; }
  { std::ofstream(dir / "c.json") << R"({"llm": {"criteria_file": "criteria.txt"}, "crawl": {"content_cap": 1000}})"; }
  const auto c = load_config(dir / "c.json");
  CHECK(c.llm.criteria_text == "Only count sites that host a chat box.");
  CHECK(c.llm.content_cap == 1000);
  std::filesystem::remove_all(dir);
}
