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

#include <cmath>
#include <filesystem>
#include <random>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "sinkhole/classifier/classifier.hpp"
#include "sinkhole/dns/net.hpp"
#include "sinkhole/dns/query_log.hpp"
#include "sinkhole/eval/dataset.hpp"
#include "sinkhole/eval/latency.hpp"
#include "sinkhole/eval/metrics.hpp"
#include "sinkhole/eval/report.hpp"
#include "sinkhole/eval/trial.hpp"

using namespace sinkhole;
using namespace sinkhole::eval;
using classifier::VerdictKind;
using Catch::Matchers::WithinAbs;
using namespace std::chrono;

namespace {

const Instant T0 = *parse_iso8601("2025-03-03T08:00:00Z");

int as_int(VerdictKind k) { return k == VerdictKind::Yes ? 1 : k == VerdictKind::No ? 0 : -1; }

std::vector<std::string> domains_with(const Dataset& ds, Label l) {
  std::vector<std::string> out;
  for (const auto& s : ds.sites)
    if (s.label == l) out.push_back(site_key(s.url));
  return out;
}

}  // namespace

TEST_CASE("compute_metrics equals the naive reference on 1000 random cases") {
  std::mt19937 rng(1234);
  for (int c = 0; c < 1000; ++c) {
    const std::size_t n = 1 + rng() % 150;
    std::vector<VerdictKind> pred(n);
    std::vector<Label> labels(n);
    std::vector<int> p_int(n);
    std::vector<bool> l_bool(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = rng() % 10;
      pred[i] = r < 5 ? VerdictKind::Yes : r < 9 ? VerdictKind::No : VerdictKind::Unknown;
      labels[i] = rng() % 2 ? Label::Positive : Label::Negative;
      p_int[i] = as_int(pred[i]);
      l_bool[i] = labels[i] == Label::Positive;
    }
    const auto m = compute_metrics(pred, labels);
    const auto o = oracle::naive_scores(p_int, l_bool);
    REQUIRE(m.matrix.tp == static_cast<std::size_t>(o.tp));
    REQUIRE(m.matrix.fp == static_cast<std::size_t>(o.fp));
    REQUIRE(m.matrix.fn == static_cast<std::size_t>(o.fn));
    REQUIRE(m.matrix.tn == static_cast<std::size_t>(o.tn));
    REQUIRE_THAT(m.accuracy, WithinAbs(o.accuracy, 1e-12));
    REQUIRE_THAT(m.precision, WithinAbs(o.precision, 1e-12));
    REQUIRE_THAT(m.recall, WithinAbs(o.recall, 1e-12));
    REQUIRE_THAT(m.f1, WithinAbs(o.f1, 1e-12));
    REQUIRE_THAT(m.mcc, WithinAbs(o.mcc, 1e-12));
    REQUIRE(m.mcc >= -1.0 - 1e-12);
    REQUIRE(m.mcc <= 1.0 + 1e-12);
  }
}

TEST_CASE("MCC is invariant under swapping the classes") {
  std::mt19937 rng(77);
  for (int c = 0; c < 1000; ++c) {
    ConfusionMatrix m{rng() % 60, rng() % 60, rng() % 60, rng() % 60};
    ConfusionMatrix swapped{m.tn, m.fn, m.fp, m.tp};
    REQUIRE_THAT(metrics_from_matrix(m).mcc, WithinAbs(metrics_from_matrix(swapped).mcc, 1e-12));
  }
}

TEST_CASE("reference matrices") {
  const auto llama = metrics_from_matrix({47, 2, 16, 61});
  CHECK_THAT(llama.accuracy, WithinAbs(0.857, 0.0005));
  CHECK_THAT(llama.precision, WithinAbs(0.959, 0.0005));
  CHECK_THAT(llama.recall, WithinAbs(0.746, 0.0005));
  CHECK_THAT(llama.f1, WithinAbs(0.839, 0.0005));
  CHECK_THAT(llama.mcc, WithinAbs(0.7326, 0.0001));
  const auto other = metrics_from_matrix({46, 1, 17, 62});
  CHECK_THAT(other.f1, WithinAbs(0.836, 0.0005));
  CHECK_THAT(other.mcc, WithinAbs(0.738, 0.0005));
}

TEST_CASE("exhaustive search recovers the reference matrices") {
  const auto llama = oracle::matrices_matching(63, 63, 0.857, 0.959, 0.746, 0.839);
  REQUIRE(llama.size() == 1);
  CHECK(llama[0].tp == 47);
  CHECK(llama[0].fp == 2);
  const auto other = oracle::matrices_matching(63, 63, 0.857, 0.979, 0.730, 0.836);
  REQUIRE(other.size() == 1);
  CHECK(other[0].tp == 46);
  CHECK(other[0].fp == 1);
}

TEST_CASE("degenerate matrices") {
  CHECK(metrics_from_matrix({10, 10, 0, 0}).mcc == 0.0);
  CHECK(metrics_from_matrix({0, 0, 10, 10}).precision == 0.0);
  CHECK(metrics_from_matrix({0, 0, 0, 0}).accuracy == 0.0);
  const std::vector<VerdictKind> p(3, VerdictKind::Yes);
  const std::vector<Label> l(2, Label::Positive);
  CHECK_THROWS_AS(compute_metrics(p, l), LengthMismatch);
}

TEST_CASE("hamming matrix is a metric") {
  std::mt19937 rng(5);
  std::vector<std::vector<VerdictKind>> d(5, std::vector<VerdictKind>(40));
  for (auto& row : d)
    for (auto& v : row) v = static_cast<VerdictKind>(rng() % 3);
  const auto h = hamming_matrix(d);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(h[i][i] == 0);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(h[i][j] == h[j][i]);
      for (std::size_t k = 0; k < 5; ++k) CHECK(h[i][k] <= h[i][j] + h[j][k]);
    }
  }
  const std::vector<VerdictKind> a = {VerdictKind::Yes, VerdictKind::No, VerdictKind::Unknown};
  const std::vector<VerdictKind> b = {VerdictKind::Yes, VerdictKind::Unknown, VerdictKind::No};
  CHECK(hamming_distance(a, b) == 2);
  CHECK_THROWS_AS(hamming_distance(a, std::vector<VerdictKind>(2)), LengthMismatch);
}

TEST_CASE("per-language metrics partition the rows") {
  const std::vector<VerdictKind> p = {VerdictKind::Yes, VerdictKind::No, VerdictKind::Yes, VerdictKind::No};
  const std::vector<Label> l = {Label::Positive, Label::Negative, Label::Negative, Label::Positive};
  const std::vector<std::string> lang = {"en", "en", "de", "de"};
  const auto m = per_language_metrics(p, l, lang);
  REQUIRE(m.size() == 2);
  CHECK(m.at("en").accuracy == 1.0);
  CHECK(m.at("de").accuracy == 0.0);
}

TEST_CASE("inclusive percentile matches spreadsheet values") {
  const std::vector<double> v = {15, 20, 35, 40, 50};
  CHECK(percentile_inclusive(v, 0.0) == 15);
  CHECK(percentile_inclusive(v, 1.0) == 50);
  CHECK(percentile_inclusive(v, 0.5) == 35);
  CHECK_THAT(percentile_inclusive(v, 0.4), WithinAbs(29.0, 1e-12));
  CHECK_THAT(percentile_inclusive(v, 0.95), WithinAbs(48.0, 1e-12));
  CHECK(percentile_inclusive({7}, 0.95) == 7);
  CHECK_THROWS(percentile_inclusive({}, 0.5));
  CHECK_THROWS(percentile_inclusive(v, 1.5));
}

TEST_CASE("latency summary on constructed samples") {
  const std::vector<LatencySamples> s = {{"reasoning", {2000, 4000, 6000}}, {"instruct", {1000, 2000, 3000}}};
  const auto sum = latency_summary(s);
  CHECK(sum.mean_ratio[0][1] == 2.0);
  CHECK(sum.mean_ratio[1][0] == 0.5);
  CHECK(sum.mean_ratio[0][0] == 1.0);
  CHECK(sum.stats[0].median == 4000);
  CHECK(sum.stats[1].min == 1000);
  CHECK(sum.stats[1].max == 3000);
  CHECK(sum.to_csv().starts_with("model,count,mean_ms"));
  CHECK(sum.to_table().find("2.00") != std::string::npos);
  const std::vector<LatencySamples> empty = {{"x", {}}};
  CHECK_THROWS_AS(latency_summary(empty), EmptySamples);
}

TEST_CASE("dataset parsing") {
  const auto ds = parse_dataset(
      "url,label,language,category\n"
      "https://chatgpt.com/,Positive,en,chat\n"
      "\"https://example.org/a,b\",negative,de,\"news, \"\"quoted\"\"\"\n");
  REQUIRE(ds.sites.size() == 2);
  CHECK(ds.sites[0].label == Label::Positive);
  CHECK(ds.sites[1].url == "https://example.org/a,b");
  CHECK(ds.sites[1].category == "news, \"quoted\"");
  CHECK(parse_dataset("").sites.empty());

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_dataset(text);
    } catch (const FormatError& e) {
      return e.line();
    } catch (const DuplicateUrl& e) {
      return 1000 + e.line();
    }
    return 0;
  };
  CHECK(line_of("url,label\nx.com,positive\n") == 1);
  CHECK(line_of("url,label,language,category\na.com,maybe,en,x\n") == 2);
  CHECK(line_of("url,label,language,category\na.com,positive,en\n") == 2);
  CHECK(line_of("url,label,language,category\nhttps://a.com/,positive,en,x\nhttps://www.a.com/x,negative,en,y\n") ==
        1003);
  CHECK(site_key("https://www.chatgpt.com/c") == "chatgpt.com");
  CHECK(site_key("poe.com") == "poe.com");
}

TEST_CASE("shipped dataset fixture") {
  const auto ds = load_dataset(oracle::fixture("dataset.csv"));
  CHECK(ds.count(Label::Positive) == 63);
  CHECK(ds.count(Label::Negative) == 63);
  CHECK(ds.by_language().size() >= 5);
}

TEST_CASE("evaluate scores the shipped verdict log") {
  const auto ds = load_dataset(oracle::fixture("dataset.csv"));
  const auto verdicts = classifier::read_verdict_log(oracle::fixture("verdicts.jsonl"));
  const auto report = evaluate(ds, verdicts);
  REQUIRE(report.models.size() == 3);
  CHECK(report.models[0].model == "llama3:8b-instruct-q4_K_M");
  CHECK(report.models[0].metrics.matrix == ConfusionMatrix{47, 2, 16, 61});
  CHECK(report.models[1].metrics.matrix == ConfusionMatrix{46, 1, 17, 62});
  CHECK(report.models[2].metrics.matrix == ConfusionMatrix{46, 1, 17, 62});
  for (const auto& m : report.models) CHECK(m.missing == 0);
  REQUIRE(report.latency.has_value());
  CHECK(report.latency->mean_ratio[1][0] > 1.9);
  CHECK(report.hamming[0][0] == 0);
  CHECK(report.hamming[1][2] == report.hamming[2][1]);
  CHECK(report.to_table().find("llama3:8b-instruct-q4_K_M") != std::string::npos);
  CHECK(report.confusion_csv().find("llama3:8b-instruct-q4_K_M,47,2,16,61") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "sinkhole_report_test";
  std::filesystem::remove_all(dir);
  report.write(dir);
  for (const char* f : {"report.json", "table.txt", "confusion.csv", "hamming.csv", "latency.csv"})
    CHECK(std::filesystem::exists(dir / f));
  std::filesystem::remove_all(dir);
}

TEST_CASE("evaluate: latest verdict wins, missing scores as Unknown") {
  const auto ds = parse_dataset("url,label,language,category\na.com,positive,en,x\nb.com,negative,en,y\n");
  auto v = [](std::string url, VerdictKind k, int minute) {
    classifier::Verdict out;
    out.model_id = "m";
    out.dossier_url = std::move(url);
    out.verdict = k;
    out.reason = "r";
    out.created_at = T0 + minutes(minute);
    return out;
  };
  const std::vector<classifier::Verdict> log = {v("https://a.com/", VerdictKind::No, 0),
                                                v("https://www.a.com/", VerdictKind::Yes, 5),
                                                v("https://a.com/", VerdictKind::No, 1)};
  const auto r = evaluate(ds, log);
  REQUIRE(r.models.size() == 1);
  CHECK(r.models[0].predictions[0] == VerdictKind::Yes);
  CHECK(r.models[0].missing == 1);
  CHECK(r.models[0].metrics.matrix == ConfusionMatrix{1, 1, 0, 0});
}

TEST_CASE("blocking trial over the fixture under a simulated clock") {
  const auto ds = load_dataset(oracle::fixture("dataset.csv"));
  const auto pos = domains_with(ds, Label::Positive);
  const auto neg = domains_with(ds, Label::Negative);
  TrialHarness h(T0);
  const auto report = run_blocking_trial(h.target(), pos, neg, hours(4));
  REQUIRE(report.phases.size() == 3);
  CHECK(report.window == Window{T0 + hours(4), T0 + hours(8)});
  const auto& pre = report.phases[0];
  const auto& during = report.phases[1];
  const auto& post = report.phases[2];
  CHECK(pre.positives_blocked + pre.negatives_blocked == 0);
  CHECK(during.positives_blocked == 63);
  CHECK(during.positives_total == 63);
  CHECK(during.negatives_blocked == 0);
  CHECK(post.positives_blocked + post.negatives_blocked == 0);
  for (const auto& p : report.phases) CHECK(p.failures == 0);
  CHECK(report.meets_expectations());
  CHECK(h.clock().now() == T0 + hours(12));
  CHECK(h.query_log().total_appended() == 1 + 3 * 126);
  CHECK(report.to_json()["meets_expectations"] == true);
}

TEST_CASE("a whitelist override mid-trial is honoured immediately") {
  const auto ds = load_dataset(oracle::fixture("dataset.csv"));
  const auto pos = domains_with(ds, Label::Positive);
  const auto neg = domains_with(ds, Label::Negative);
  TrialHarness h(T0);
  TrialOptions opt;
  opt.rounds_per_phase = 2;
  opt.on_phase_start = [&](Phase p, Instant) {
    if (p == Phase::During) h.store().whitelist_override(pos.front(), "teacher override");
  };
  const auto report = run_blocking_trial(h.target(), pos, neg, hours(4), opt);
  CHECK(report.phases[1].positives_blocked == 2 * 62);
  CHECK(report.phases[1].positives_total == 2 * 63);
  CHECK_FALSE(report.meets_expectations());
}

TEST_CASE("trial refuses an unreachable resolver") {
  ManualClock clock(T0);
  blocklist::BlocklistStore store(clock);
  // Bound but never read: queries go unanswered.
  auto silent = dns::bind_socket(dns::parse_endpoint("127.0.0.1:0", 0), SOCK_DGRAM);
  TrialTarget target{dns::bound_endpoint(silent), store, clock};
  TrialOptions opt;
  opt.query_timeout = milliseconds(200);
  CHECK_THROWS_AS(run_blocking_trial(target, {"chatgpt.com"}, {"wikipedia.org"}, hours(1), opt), TrialSetupError);
  CHECK(store.snapshot()->entries().empty());
  CHECK_THROWS_AS(run_blocking_trial(target, {"chatgpt.com"}, {}, milliseconds(0), opt), std::invalid_argument);
}
