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

#include <httplib.h>

#include <filesystem>
#include <thread>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "sinkhole/classifier/chat.hpp"
#include "sinkhole/classifier/classifier.hpp"
#include "sinkhole/classifier/verdict.hpp"
#include "sinkhole/discovery/dossier.hpp"

using namespace sinkhole;
using namespace sinkhole::classifier;
using namespace std::chrono;
using nlohmann::json;

namespace {

const Instant T0 = *parse_iso8601("2025-03-03T08:00:00Z");

discovery::WebsiteDossier dossier(const std::string& url, std::string content = "# Chat\n\nAsk anything") {
  return {url, {"Title \"quoted\"", "A description", "ai, chat"}, std::move(content), T0,
          discovery::FetchStatus::ok()};
}

// Pulls the dossier JSON back out of a rendered prompt.
json embedded_dossier(const std::string& prompt) {
  const auto start = prompt.find('{');
  const auto end = prompt.find('\n', start);
  return json::parse(prompt.substr(start, end - start));
}

class TimeoutClient final : public ChatClient {
 public:
  int calls = 0;
  std::string complete(const ChatRequest&) override {
    ++calls;
    throw RequestTimeout("too slow");
  }
};

}  // namespace

TEST_CASE("verdict corpus") {
  const auto corpus = json::parse(oracle::read_text(oracle::fixture("verdict_corpus.json")));
  REQUIRE(corpus.size() >= 20);
  std::size_t malformed = 0;
  for (const auto& c : corpus) {
    const auto name = c["name"].get<std::string>();
    const auto raw = c["raw"].get<std::string>();
    const auto expect = c["expect"].get<std::string>();
    INFO(name);
    if (expect == "parse_failure") {
      ++malformed;
      CHECK_THROWS_AS(parse_verdict(raw), ParseFailure);
    } else {
      const auto v = parse_verdict(raw);
      CHECK(to_string(v.verdict) == expect);
      CHECK_FALSE(v.reason.empty());
    }
  }
  CHECK(malformed >= 5);
}

TEST_CASE("reasoning blocks are stripped") {
  CHECK(strip_reasoning("<think>{\"verdict\":\"No\"}</think>{\"verdict\":\"Yes\"}") == "{\"verdict\":\"Yes\"}");
  CHECK(strip_reasoning("plan plan</think>answer") == "answer");
  CHECK(strip_reasoning("answer<think>never closed") == "answer");
  CHECK(strip_reasoning("no tags") == "no tags");
  const auto v = parse_verdict("<think>Maybe {\"verdict\": \"No\", \"reason\": \"draft\"}</think>\n"
                               "{\"verdict\": \"Yes\", \"reason\": \"final\"}");
  CHECK(v == ParsedVerdict{VerdictKind::Yes, "final"});
}

TEST_CASE("parser edge cases") {
  CHECK(parse_verdict("{\"VERDICT\": \"yes\", \"Reason\": \"r\"}").verdict == VerdictKind::Yes);
  CHECK(parse_verdict("```json\n{\"verdict\": \"No\", \"reason\": \"a } brace\"}\n```").reason == "a } brace");
  CHECK(parse_verdict("{\"meta\": 1} then {\"verdict\": \"No\", \"reason\": \"second\"}").reason == "second");
  CHECK_THROWS_AS(parse_verdict("{\"verdict\": \"Maybe\", \"reason\": \"r\"}"), ParseFailure);
  CHECK_THROWS_AS(parse_verdict("{\"verdict\": \"Yes\", \"reason\": \"\"}"), ParseFailure);
  CHECK_THROWS_AS(parse_verdict("{\"verdict\": \"Yes\"}"), ParseFailure);
  CHECK_THROWS_AS(parse_verdict(""), ParseFailure);
  CHECK_THROWS_AS(parse_verdict("{{{{"), ParseFailure);
}

TEST_CASE("verdict JSON round-trips") {
  Verdict v{"v-1", VerdictKind::Unknown, "error: timeout: x", "qwen3:8b", Millis{3900}, "raw", "https://a.com/", T0};
  CHECK(verdict_from_json(to_json(v)) == v);
  const auto j = to_json(v);
  CHECK(j["verdict"] == "unknown");
  CHECK(j["latency_ms"] == 3900);
  for (auto k : {VerdictKind::Yes, VerdictKind::No, VerdictKind::Unknown})
    CHECK(verdict_kind_from_string(to_string(k)) == k);
}

TEST_CASE("prompt carries the dossier, the criteria and the answer format") {
  ClassifierConfig cfg;
  const auto d = dossier("https://chatgpt.com/", std::string(5000, 'w'));
  const auto prompt = render_prompt(d, cfg);
  CHECK(prompt.find("https://chatgpt.com/") != std::string::npos);
  CHECK(prompt.find(kDefaultCriteria) != std::string::npos);
  CHECK(prompt.find("{\"verdict\": answer, \"reason\": reason}") != std::string::npos);
  CHECK(prompt.find("general-purpose, generative AI chat service") != std::string::npos);

  const auto embedded = embedded_dossier(prompt);
  CHECK(embedded["url"] == d.url);
  CHECK(embedded["title"] == d.metadata.title);
  CHECK(embedded["keywords"] == d.metadata.keywords);
  CHECK(embedded["content"].get<std::string>().size() == cfg.content_cap);

  cfg.criteria_text = "Custom criteria for the test.";
  const auto custom = render_prompt(d, cfg);
  CHECK(custom.find("Custom criteria for the test.") != std::string::npos);
  CHECK(custom.find(kDefaultCriteria) == std::string::npos);

  CHECK_THROWS_AS(render_prompt(dossier(""), ClassifierConfig{}), std::invalid_argument);
}

TEST_CASE("prompt rendering is deterministic and survives odd content") {
  ClassifierConfig cfg;
  const auto d = dossier("https://x.example/", "quote \" backslash \\ newline \n tab \t bad \xff utf8");
  CHECK(render_prompt(d, cfg) == render_prompt(d, cfg));
  CHECK_NOTHROW(embedded_dossier(render_prompt(d, cfg)));
}

TEST_CASE("config validation") {
  ClassifierConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_retries = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.temperature = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("stub rules answer by host suffix") {
  StubChatClient stub(StubChatClient::load_rules(oracle::fixture("stub_rules.json").string()));
  ManualClock clock(T0);
  ClassifierConfig cfg;
  CHECK(classify(dossier("https://chatgpt.com/"), cfg, stub, clock).verdict == VerdictKind::Yes);
  CHECK(classify(dossier("https://www.coursera.org/"), cfg, stub, clock).verdict == VerdictKind::No);
  CHECK(classify(dossier("https://unknown-site.example/"), cfg, stub, clock).verdict == VerdictKind::No);
  CHECK(stub.calls() == 3);
  CHECK(stub.requests()[0].model == cfg.model_id);
  CHECK(stub.requests()[0].temperature == 0.0);
}

TEST_CASE("unparseable answers are retried with a reminder") {
  ManualClock clock(T0);
  ClassifierConfig cfg;
  SECTION("recovers on the last attempt") {
    StubChatClient stub({});
    stub.queue({"I think yes", "still prose", "{\"verdict\": \"Yes\", \"reason\": \"chat app\"}"});
    const auto v = classify(dossier("https://a.example/"), cfg, stub, clock);
    CHECK(v.verdict == VerdictKind::Yes);
    CHECK(v.reason == "chat app");
    REQUIRE(stub.calls() == 3);
    CHECK(stub.requests()[0].messages.back().content.find(kJsonOnlyReminder) == std::string::npos);
    CHECK(stub.requests()[1].messages.back().content.find(kJsonOnlyReminder) != std::string::npos);
    CHECK(stub.requests()[2].messages.size() == 1);
  }
  SECTION("gives up as Unknown") {
    StubChatClient stub({}, "never json");
    const auto v = classify(dossier("https://a.example/"), cfg, stub, clock);
    CHECK(v.verdict == VerdictKind::Unknown);
    CHECK(v.reason.starts_with("error: unparseable response after 3 attempt(s)"));
    CHECK(v.raw_response == "never json");
    CHECK(stub.calls() == 3);
  }
  SECTION("zero retries means one attempt") {
    cfg.max_retries = 0;
    StubChatClient stub({}, "never json");
    CHECK(classify(dossier("https://a.example/"), cfg, stub, clock).verdict == VerdictKind::Unknown);
    CHECK(stub.calls() == 1);
  }
}

TEST_CASE("transport failures become Unknown without retry") {
  ManualClock clock(T0);
  ClassifierConfig cfg;
  StubChatClient dead({});
  dead.die_after(0);
  const auto v = classify(dossier("https://a.example/"), cfg, dead, clock);
  CHECK(v.verdict == VerdictKind::Unknown);
  CHECK(v.reason.starts_with("error: endpoint unreachable"));
  CHECK(dead.calls() == 1);

  TimeoutClient slow;
  const auto t = classify(dossier("https://a.example/"), cfg, slow, clock);
  CHECK(t.reason.starts_with("error: timeout"));
  CHECK(slow.calls == 1);
  CHECK(t.created_at == T0);
  CHECK(t.id.starts_with("v-"));
  CHECK(t.id != v.id);
}

TEST_CASE("batch classification isolates a dead model") {
  ManualClock clock(T0);
  std::vector<discovery::WebsiteDossier> ds;
  for (int i = 0; i < 5; ++i) ds.push_back(dossier("https://s" + std::to_string(i) + ".example/"));
  StubChatClient healthy({}, "{\"verdict\": \"No\", \"reason\": \"blog\"}");
  StubChatClient flaky({}, "{\"verdict\": \"Yes\", \"reason\": \"chat\"}");
  flaky.die_after(2);
  ClassifierConfig a, b;
  a.model_id = "healthy";
  b.model_id = "flaky";
  const std::vector<ModelRun> runs = {{a, &healthy}, {b, &flaky}};

  const auto path = std::filesystem::temp_directory_path() / "sinkhole_verdicts_test.jsonl";
  std::filesystem::remove(path);
  BatchResult r;
  {
    VerdictLog log(path);
    r = classify_batch(ds, runs, clock, &log);
  }
  CHECK(r.total() == 10);
  CHECK(r.model_ids == std::vector<std::string>{"healthy", "flaky"});
  for (const auto& v : r.verdicts[0]) CHECK(v.verdict == VerdictKind::No);
  CHECK(r.verdicts[1][0].verdict == VerdictKind::Yes);
  CHECK(r.verdicts[1][1].verdict == VerdictKind::Yes);
  for (std::size_t i = 2; i < 5; ++i) CHECK(r.verdicts[1][i].verdict == VerdictKind::Unknown);
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.verdicts[1][i].dossier_url == ds[i].url);
  CHECK(r.latencies(0).size() == 5);

  const auto logged = read_verdict_log(path);
  CHECK(logged.size() == 10);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(classify_batch({}, runs, clock), std::invalid_argument);
}

TEST_CASE("only Yes verdicts reach the blocklist") {
  ManualClock clock(T0);
  blocklist::BlocklistStore store(clock);
  PolicyConfig policy;
  Verdict yes{"v-yes", VerdictKind::Yes, "chat", "m", Millis{1}, "", "https://www.chatgpt.com/c/1", T0};
  Verdict no = yes;
  no.id = "v-no";
  no.verdict = VerdictKind::No;
  no.dossier_url = "https://wikipedia.org/";
  Verdict unknown = no;
  unknown.verdict = VerdictKind::Unknown;

  CHECK(verdict_domain(yes) == "chatgpt.com");
  const auto e = apply_verdict(store, yes, policy);
  REQUIRE(e.has_value());
  CHECK(e->domain == "chatgpt.com");
  CHECK(e->source == blocklist::Source::Classifier);
  CHECK(e->verdict_id == "v-yes");
  CHECK(e->tag == blocklist::kAiSinkholeTag);
  CHECK_FALSE(apply_verdict(store, no, policy).has_value());
  CHECK_FALSE(apply_verdict(store, unknown, policy).has_value());
  policy.auto_block_on_yes = false;
  Verdict other = yes;
  other.dossier_url = "https://claude.ai/";
  CHECK_FALSE(apply_verdict(store, other, policy).has_value());
  CHECK(store.snapshot()->entries().size() == 1);
}

TEST_CASE("chat response shapes") {
  CHECK(HttpChatClient::extract_text(R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})") == "hi");
  CHECK(HttpChatClient::extract_text(R"({"choices":[{"text":"legacy"}]})") == "legacy");
  CHECK(HttpChatClient::extract_text(R"({"message":{"content":"ollama chat"}})") == "ollama chat");
  CHECK(HttpChatClient::extract_text(R"({"response":"ollama generate"})") == "ollama generate");
  CHECK_THROWS(HttpChatClient::extract_text(R"({"error":"model not found"})"));
  CHECK_THROWS(HttpChatClient::extract_text("not json"));
}

TEST_CASE("HTTP chat client against a local server") {
  httplib::Server srv;
  json seen;
  std::string auth;
  srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"message":{"content":"{\"verdict\":\"Yes\",\"reason\":\"r\"}"}}]})",
                    "application/json");
  });
  srv.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(milliseconds(1500));
    res.set_content("{}", "application/json");
  });
  srv.Post("/fail", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  const int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  const auto base = "http://127.0.0.1:" + std::to_string(port);

  ManualClock clock(T0);
  ClassifierConfig cfg;
  cfg.model_id = "llama3:8b-instruct-q4_K_M";
  cfg.request_timeout = milliseconds(500);
  HttpChatClient client(base, "/v1/chat/completions", "secret");
  const auto v = classify(dossier("https://chatgpt.com/"), cfg, client, clock);
  CHECK(v.verdict == VerdictKind::Yes);
  CHECK(seen["model"] == cfg.model_id);
  CHECK(seen["temperature"] == 0.0);
  CHECK(seen["stream"] == false);
  CHECK(seen["messages"][0]["role"] == "user");
  CHECK(auth == "Bearer secret");

  HttpChatClient slow(base, "/slow");
  CHECK(classify(dossier("https://a.example/"), cfg, slow, clock).reason.starts_with("error: timeout"));
  HttpChatClient failing(base, "/fail");
  CHECK(classify(dossier("https://a.example/"), cfg, failing, clock).reason.starts_with("error: endpoint"));
  srv.stop();
  t.join();
  CHECK(classify(dossier("https://a.example/"), cfg, client, clock).reason.starts_with("error: endpoint"));
}
