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

// Command-line front end: evaluation, blocking trial, crawling, classification,
// serving, and list import/export.

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sinkhole/api/control_api.hpp"
#include "sinkhole/classifier/classifier.hpp"
#include "sinkhole/common/domain.hpp"
#include "sinkhole/common/hash.hpp"
#include "sinkhole/config.hpp"
#include "sinkhole/discovery/candidates.hpp"
#include "sinkhole/discovery/crawler.hpp"
#include "sinkhole/dns/resolver.hpp"
#include "sinkhole/dns/server.hpp"
#include "sinkhole/eval/report.hpp"
#include "sinkhole/eval/trial.hpp"

namespace {

using namespace sinkhole;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

AppConfig config_or_default(const std::string& path) {
  return path.empty() ? AppConfig{} : load_config(path);
}

std::vector<std::string> dataset_urls(const eval::Dataset& ds) {
  std::vector<std::string> urls;
  for (const auto& s : ds.sites) urls.push_back(s.url.find("://") == std::string::npos ? "https://" + s.url + "/" : s.url);
  return urls;
}

// Dossiers from the archive, restricted to the dataset when one is given.
std::vector<discovery::WebsiteDossier> archive_dossiers(const std::string& dir, const eval::Dataset* ds) {
  auto all = discovery::read_archive(dir);
  if (!ds) return all;
  std::vector<discovery::WebsiteDossier> out;
  for (const auto& site : ds->sites) {
    const auto key = eval::site_key(site.url);
    for (const auto& d : all) {
      if (eval::site_key(d.url) == key) {
        out.push_back(d);
        break;
      }
    }
  }
  return out;
}

int cmd_evaluate(const std::string& dataset_path, const std::string& verdicts_path, const std::string& out_dir,
                 bool as_json) {
  const auto ds = eval::load_dataset(dataset_path);
  const auto verdicts = classifier::read_verdict_log(verdicts_path);
  const auto report = eval::evaluate(ds, verdicts);
  if (!out_dir.empty()) report.write(out_dir);
  std::cout << (as_json ? report.to_json().dump(2) + "\n" : report.to_table());
  return 0;
}

int cmd_trial(const std::string& dataset_path, double phase_secs, std::size_t rounds, bool real_time,
              const std::string& out, bool as_json) {
  const auto ds = eval::load_dataset(dataset_path);
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  for (const auto& s : ds.sites) (s.label == eval::Label::Positive ? positives : negatives).push_back(eval::site_key(s.url));

  // Fixed start so simulated runs produce identical reports.
  const Instant start = real_time ? SystemClock{}.now() : *parse_iso8601("2025-03-03T08:00:00Z");
  eval::TrialHarness harness(start);
  eval::TrialOptions opts;
  opts.rounds_per_phase = rounds;
  opts.real_time = real_time;
  const auto phase = std::chrono::milliseconds(static_cast<std::int64_t>(phase_secs * 1000));
  const auto report = eval::run_blocking_trial(harness.target(), positives, negatives, phase, opts);
  if (!out.empty()) write_file(out, report.to_json().dump(2) + "\n");
  std::cout << (as_json ? report.to_json().dump(2) + "\n" : report.to_table());
  return report.meets_expectations() ? 0 : 1;
}

int cmd_crawl(const AppConfig& cfg, const std::string& dataset_path, const std::string& seeds_path,
              const std::string& out_dir, std::size_t parallelism) {
  std::vector<std::string> urls;
  if (!dataset_path.empty()) urls = dataset_urls(eval::load_dataset(dataset_path));
  if (!seeds_path.empty()) {
    const auto seeds = discovery::parse_seed_list(read_file(seeds_path));
    urls.insert(urls.end(), seeds.begin(), seeds.end());
  }
  for (const auto& p : cfg.crawl.seed_lists) {
    const auto seeds = discovery::parse_seed_list(read_file(p.string()));
    urls.insert(urls.end(), seeds.begin(), seeds.end());
  }
  if (urls.empty()) throw std::runtime_error("nothing to crawl: give --dataset or --seeds");
  SystemClock clock;
  discovery::HttplibFetcher fetcher;
  discovery::Crawler crawler(cfg.crawl.limits, cfg.crawl.per_host_interval(), fetcher, clock);
  const auto dossiers = crawler.crawl(urls, parallelism);
  std::size_t ok = 0;
  for (const auto& d : dossiers) {
    discovery::write_dossier(out_dir, d);
    ok += d.fetch_status.kind == discovery::FetchStatus::Kind::Ok ? 1 : 0;
    std::cout << d.fetch_status.to_string() << '\t' << d.url << '\n';
  }
  std::cout << ok << "/" << dossiers.size() << " fetched, archive in " << out_dir << '\n';
  return 0;
}

struct ClassifyArgs {
  std::string archive;
  std::string dataset;
  std::string out;
  std::vector<std::string> models;
  std::string stub_rules;
  std::string store;
  bool apply = false;
};

int cmd_classify(const AppConfig& cfg, const ClassifyArgs& a) {
  eval::Dataset ds;
  if (!a.dataset.empty()) ds = eval::load_dataset(a.dataset);
  const auto dossiers = archive_dossiers(a.archive, a.dataset.empty() ? nullptr : &ds);
  if (dossiers.empty()) throw std::runtime_error("no dossiers in " + a.archive);

  std::vector<std::unique_ptr<classifier::ChatClient>> clients;
  std::vector<classifier::ModelRun> runs;
  const auto models = a.models.empty() ? std::vector<std::string>{cfg.llm.model_id} : a.models;
  for (const auto& m : models) {
    auto c = cfg.llm;
    c.model_id = m;
    if (!a.stub_rules.empty()) {
      clients.push_back(std::make_unique<classifier::StubChatClient>(classifier::StubChatClient::load_rules(a.stub_rules)));
    } else {
      clients.push_back(std::make_unique<classifier::HttpChatClient>(c.endpoint, c.path));
    }
    runs.push_back({c, clients.back().get()});
  }
  SystemClock clock;
  classifier::VerdictLog log(a.out);
  const auto batch = classifier::classify_batch(dossiers, runs, clock, &log);

  std::unique_ptr<blocklist::BlocklistStore> store;
  if (a.apply) {
    const auto path = !a.store.empty() ? std::optional<std::filesystem::path>(a.store) : cfg.blocklist_path;
    if (!path) throw std::runtime_error("--apply needs --store or storage.blocklist in the config");
    store = std::make_unique<blocklist::BlocklistStore>(clock, *path);
  }
  std::size_t applied = 0;
  for (std::size_t m = 0; m < batch.model_ids.size(); ++m) {
    std::size_t yes = 0, no = 0, unknown = 0;
    for (const auto& v : batch.verdicts[m]) {
      (v.verdict == classifier::VerdictKind::Yes ? yes : v.verdict == classifier::VerdictKind::No ? no : unknown)++;
      if (store && classifier::apply_verdict(*store, v, cfg.policy)) ++applied;
    }
    std::printf("%-24s yes=%zu no=%zu unknown=%zu\n", batch.model_ids[m].c_str(), yes, no, unknown);
  }
  if (store) std::printf("%zu entries added or refreshed under %s\n", applied, cfg.policy.tag.c_str());
  std::printf("%zu verdicts appended to %s\n", batch.total(), a.out.c_str());
  return 0;
}

int cmd_smoke(const AppConfig& cfg, const std::string& archive, const std::string& dataset_path,
              const std::string& endpoint, const std::string& model, std::size_t limit) {
  const auto ds = eval::load_dataset(dataset_path);
  auto dossiers = archive_dossiers(archive, &ds);
  if (dossiers.size() > limit) dossiers.resize(limit);
  if (dossiers.size() < 10) std::cerr << "warning: fewer than 10 dossiers available\n";
  auto c = cfg.llm;
  if (!endpoint.empty()) c.endpoint = endpoint;
  if (!model.empty()) c.model_id = model;
  classifier::HttpChatClient client(c.endpoint, c.path);
  SystemClock clock;
  std::vector<classifier::Verdict> verdicts;
  for (const auto& d : dossiers) {
    auto v = classifier::classify(d, c, client, clock);
    std::printf("%-8s %6lld ms  %s\n", std::string(classifier::to_string(v.verdict)).c_str(),
                static_cast<long long>(v.latency.count()), d.url.c_str());
    verdicts.push_back(std::move(v));
  }
  eval::Dataset subset;
  for (const auto& d : dossiers) {
    for (const auto& s : ds.sites) {
      if (eval::site_key(s.url) == eval::site_key(d.url)) subset.sites.push_back(s);
    }
  }
  std::cout << "\nlive smoke run, informational only (no pass threshold)\n"
            << eval::evaluate(subset, verdicts).to_table();
  return 0;
}

volatile std::sig_atomic_t g_stop = 0;

int cmd_serve(const AppConfig& cfg) {
  SystemClock clock;
  blocklist::BlocklistStore store(clock, cfg.blocklist_path);
  dns::NetworkUpstream upstream(cfg.upstream_config());
  dns::QueryLog qlog;
  const auto salt = cfg.dns.client_salt.empty() ? random_hex_token() : cfg.dns.client_salt;
  dns::Resolver resolver(store, upstream, qlog, clock, dns::ClientKeyHasher(salt), cfg.resolver_config());
  dns::DnsServer::Options so;
  so.listen = cfg.dns.listen;
  so.workers = cfg.dns.workers;
  dns::DnsServer server(resolver, so);
  server.start();

  api::VerdictBook verdicts;
  if (cfg.verdict_log_path && std::filesystem::exists(*cfg.verdict_log_path)) verdicts.load(*cfg.verdict_log_path);
  api::ApiOptions ao;
  ao.token = cfg.api.token;
  if (ao.token.empty()) {
    ao.token = random_hex_token();
    std::cerr << "api.token not set; generated token for this run: " << ao.token << '\n';
  }
  ao.max_page_size = cfg.api.max_page_size;
  ao.tag = cfg.policy.tag;
  ao.dashboard_dir = cfg.api.dashboard_dir;
  ao.cors_origin = cfg.api.cors_origin;
  api::ControlApi control({store, qlog, verdicts, clock, &resolver}, ao);
  const auto api_ep = dns::parse_endpoint(cfg.api.listen, 8053);
  control.start(api_ep.host(), api_ep.port());

  std::cerr << "dns on " << server.endpoint().to_string() << ", upstream " << upstream.describe() << '\n'
            << "control api on http://" << api_ep.host() << ':' << control.port() << '\n';

  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(500));
    if (cfg.dns.query_log_path) qlog.flush_to(*cfg.dns.query_log_path);
  }
  control.stop();
  server.stop();
  if (cfg.dns.query_log_path) qlog.flush_to(*cfg.dns.query_log_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI chat-service DNS sinkhole: discovery, classification, blocking and evaluation"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  std::string dataset, verdicts, out, archive, seeds, store, tag{blocklist::kAiSinkholeTag}, endpoint, model, list;
  bool as_json = false;

  auto* evaluate = app.add_subcommand("evaluate", "Score a verdict log against a labeled dataset");
  evaluate->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--verdicts", verdicts)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", out, "Directory for report.json and CSVs");
  evaluate->add_flag("--json", as_json);

  double phase_secs = 4 * 3600;
  std::size_t rounds = 1;
  bool real_time = false;
  auto* trial = app.add_subcommand("trial", "Three-phase blocking trial against a loopback resolver");
  trial->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
  trial->add_option("--phase-secs", phase_secs, "Length of each phase")->check(CLI::PositiveNumber);
  trial->add_option("--rounds", rounds, "Browsing rounds per phase")->check(CLI::PositiveNumber);
  trial->add_flag("--real-time", real_time, "Wait out the phases instead of simulating the clock");
  trial->add_option("--out", out, "Write the JSON report here");
  trial->add_flag("--json", as_json);

  std::size_t parallelism = 4;
  auto* crawl = app.add_subcommand("crawl", "Fetch sites and write a dossier archive");
  crawl->add_option("--dataset", dataset)->check(CLI::ExistingFile);
  crawl->add_option("--seeds", seeds)->check(CLI::ExistingFile);
  crawl->add_option("--out", out)->required();
  crawl->add_option("--parallel", parallelism)->check(CLI::PositiveNumber);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify archived dossiers into a verdict log");
  classify->add_option("--archive", ca.archive)->required()->check(CLI::ExistingDirectory);
  classify->add_option("--dataset", ca.dataset, "Only dossiers for these sites")->check(CLI::ExistingFile);
  classify->add_option("--out", ca.out, "Verdict log (appended)")->required();
  classify->add_option("--model", ca.models, "Model id; repeat for several");
  classify->add_option("--stub-rules", ca.stub_rules, "Use the deterministic stub with these rules")
      ->check(CLI::ExistingFile);
  classify->add_flag("--apply", ca.apply, "Apply the blocking policy to the store");
  classify->add_option("--store", ca.store, "Blocklist store file");

  auto* serve = app.add_subcommand("serve", "Run the DNS resolver and the control API");

  auto* exp = app.add_subcommand("export", "Print the subscription document for a tag");
  exp->add_option("--store", store)->required();
  exp->add_option("--tag", tag);
  exp->add_option("--out", out);

  auto* imp = app.add_subcommand("import", "Replace a tag's entries with a subscription document");
  imp->add_option("--store", store)->required();
  imp->add_option("--tag", tag);
  imp->add_option("list", list)->required()->check(CLI::ExistingFile);

  std::size_t smoke_limit = 20;
  auto* smoke = app.add_subcommand("smoke", "Classify archived dossiers against a live chat endpoint (informational)");
  smoke->add_option("--archive", archive)->required()->check(CLI::ExistingDirectory);
  smoke->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
  smoke->add_option("--endpoint", endpoint, "Base URL, e.g. http://127.0.0.1:11434");
  smoke->add_option("--model", model);
  smoke->add_option("--limit", smoke_limit)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = config_or_default(config_path);
    if (*evaluate) return cmd_evaluate(dataset, verdicts, out, as_json);
    if (*trial) return cmd_trial(dataset, phase_secs, rounds, real_time, out, as_json);
    if (*crawl) return cmd_crawl(cfg, dataset, seeds, out, parallelism);
    if (*classify) return cmd_classify(cfg, ca);
    if (*serve) return cmd_serve(cfg);
    if (*smoke) return cmd_smoke(cfg, archive, dataset, endpoint, model, smoke_limit);
    SystemClock clock;
    blocklist::BlocklistStore st(clock, std::filesystem::path(store));
    if (*exp) {
      const auto doc = st.export_list(tag, clock.now());
      if (out.empty()) {
        std::cout << doc;
      } else {
        write_file(out, doc);
      }
      return 0;
    }
    if (*imp) {
      const auto added = st.import_list(read_file(list), tag);
      std::cout << added << " new entries under " << tag << '\n';
      return 0;
    }
  } catch (const blocklist::ParseError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
