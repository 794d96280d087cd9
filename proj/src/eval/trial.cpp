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

#include "sinkhole/eval/trial.hpp"

#include <algorithm>
#include <cstdio>
#include <thread>

#include "sinkhole/common/domain.hpp"
#include "sinkhole/dns/message.hpp"
#include "sinkhole/dns/query_log.hpp"
#include "sinkhole/dns/resolver.hpp"
#include "sinkhole/dns/server.hpp"
#include "sinkhole/dns/upstream.hpp"

namespace sinkhole::eval {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Pre:
      return "pre";
    case Phase::During:
      return "during";
    case Phase::Post:
      return "post";
  }
  return "pre";
}

bool PhaseReport::meets_expectations() const {
  if (phases.size() != 3) return false;
  for (const auto& p : phases) {
    if (p.failures != 0) return false;
    if (p.phase == Phase::During) {
      if (p.positives_blocked != p.positives_total || p.negatives_blocked != 0) return false;
    } else if (p.positives_blocked != 0 || p.negatives_blocked != 0) {
      return false;
    }
  }
  return true;
}

std::size_t PhaseReport::blocked_total() const {
  std::size_t n = 0;
  for (const auto& p : phases) n += p.positives_blocked + p.negatives_blocked;
  return n;
}

nlohmann::json PhaseReport::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& p : phases) {
    arr.push_back({{"phase", to_string(p.phase)},
                   {"start", format_iso8601(p.start)},
                   {"end", format_iso8601(p.end)},
                   {"positives_total", p.positives_total},
                   {"positives_blocked", p.positives_blocked},
                   {"negatives_total", p.negatives_total},
                   {"negatives_blocked", p.negatives_blocked},
                   {"failures", p.failures},
                   {"blocked_domains", p.blocked_domains}});
  }
  return {{"tag", tag},
          {"window", {{"start", format_iso8601(window.start)}, {"end", format_iso8601(window.end)}}},
          {"phases", arr},
          {"meets_expectations", meets_expectations()}};
}

std::string PhaseReport::to_table() const {
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-8s %-26s %-26s %12s %12s %8s\n", "phase", "start", "end", "positives",
                "negatives", "failed");
  out += buf;
  for (const auto& p : phases) {
    const auto pos = std::to_string(p.positives_blocked) + "/" + std::to_string(p.positives_total);
    const auto neg = std::to_string(p.negatives_blocked) + "/" + std::to_string(p.negatives_total);
    std::snprintf(buf, sizeof buf, "%-8s %-26s %-26s %12s %12s %8zu\n", std::string(to_string(p.phase)).c_str(),
                  format_iso8601(p.start).c_str(), format_iso8601(p.end).c_str(), pos.c_str(), neg.c_str(),
                  p.failures);
    out += buf;
  }
  out += meets_expectations() ? "result: expected blocking behaviour observed\n"
                              : "result: blocking behaviour differs from expectation\n";
  return out;
}

namespace {

enum class Probe { Blocked, Open, Failed };

Probe probe(const dns::Endpoint& server, const std::string& domain, std::uint16_t id,
            std::chrono::milliseconds timeout) {
  const auto query = dns::make_query(id, domain, dns::rtype::A);
  try {
    const auto wire = dns::udp_exchange(server, dns::serialize_message(query), timeout);
    const auto answer = dns::parse_message(wire);
    if (answer.id != id || answer.flags.rcode != dns::rcode::NoError) return Probe::Failed;
    for (const auto& rr : answer.answers) {
      if (rr.type == dns::rtype::A && rr.rdata == dns::ipv4_rdata(0, 0, 0, 0)) return Probe::Blocked;
    }
    return answer.answers.empty() ? Probe::Failed : Probe::Open;
  } catch (const std::exception&) {
    return Probe::Failed;
  }
}

}  // namespace

PhaseReport run_blocking_trial(TrialTarget target, const std::vector<std::string>& positives,
                               const std::vector<std::string>& negatives, std::chrono::milliseconds phase_duration,
                               const TrialOptions& options) {
  if (phase_duration <= std::chrono::milliseconds::zero()) throw std::invalid_argument("phase duration must be > 0");
  if (options.rounds_per_phase == 0) throw std::invalid_argument("rounds_per_phase must be >= 1");

  std::vector<std::string> pos;
  std::vector<std::string> neg;
  for (const auto& d : positives) pos.push_back(require_domain(d));
  for (const auto& d : negatives) neg.push_back(require_domain(d));

  std::uint16_t next_id = 1;
  // Any answer at all proves the resolver is listening.
  try {
    const auto q = dns::make_query(next_id++, "trial-probe.invalid", dns::rtype::A);
    dns::udp_exchange(target.resolver, dns::serialize_message(q), options.query_timeout);
  } catch (const std::exception& e) {
    throw TrialSetupError("resolver " + target.resolver.to_string() + " not reachable: " + e.what());
  }

  auto move_clock = [&](Instant t) {
    if (options.real_time && t > target.clock.now()) std::this_thread::sleep_for(t - target.clock.now());
    target.clock.set(t);
  };

  const Instant t0 = target.clock.now();
  const Millis d = std::chrono::duration_cast<Millis>(phase_duration);
  PhaseReport report;
  report.tag = options.tag;
  report.window = Window{t0 + d, t0 + 2 * d};

  for (const auto& domain : pos) target.store.add_entry(domain, options.tag, report.window, blocklist::Source::Manual);
  target.store.set_tag_window(options.tag, report.window);

  for (const Phase phase : {Phase::Pre, Phase::During, Phase::Post}) {
    PhaseResult r;
    r.phase = phase;
    r.start = t0 + d * static_cast<int>(phase);
    r.end = r.start + d;
    const Millis step = d / static_cast<Millis::rep>(options.rounds_per_phase);
    move_clock(r.start + step / 2);
    if (options.on_phase_start) options.on_phase_start(phase, target.clock.now());
    for (std::size_t round = 0; round < options.rounds_per_phase; ++round) {
      move_clock(r.start + step * static_cast<Millis::rep>(round) + step / 2);
      for (const auto& domain : pos) {
        ++r.positives_total;
        const auto p = probe(target.resolver, domain, next_id++, options.query_timeout);
        if (p == Probe::Blocked) {
          ++r.positives_blocked;
          r.blocked_domains.push_back(domain);
        } else if (p == Probe::Failed) {
          ++r.failures;
        }
      }
      for (const auto& domain : neg) {
        ++r.negatives_total;
        const auto p = probe(target.resolver, domain, next_id++, options.query_timeout);
        if (p == Probe::Blocked) {
          ++r.negatives_blocked;
          r.blocked_domains.push_back(domain);
        } else if (p == Probe::Failed) {
          ++r.failures;
        }
      }
    }
    std::sort(r.blocked_domains.begin(), r.blocked_domains.end());
    r.blocked_domains.erase(std::unique(r.blocked_domains.begin(), r.blocked_domains.end()), r.blocked_domains.end());
    report.phases.push_back(std::move(r));
  }
  move_clock(t0 + 3 * d);
  return report;
}

TrialHarness::TrialHarness(Instant start) : clock_(start) {
  store_ = std::make_unique<blocklist::BlocklistStore>(clock_);
  upstream_server_ = std::make_unique<dns::FakeUpstreamServer>();
  dns::UpstreamConfig uc;
  uc.address = upstream_server_->address();
  uc.timeout = std::chrono::milliseconds(1000);
  upstream_ = std::make_unique<dns::NetworkUpstream>(uc);
  log_ = std::make_unique<dns::QueryLog>(100000);
  resolver_ = std::make_unique<dns::Resolver>(*store_, *upstream_, *log_, clock_, dns::ClientKeyHasher("trial"));
  dns::DnsServer::Options so;
  so.listen = "127.0.0.1:0";
  so.workers = 4;
  server_ = std::make_unique<dns::DnsServer>(*resolver_, so);
  server_->start();
}

TrialHarness::~TrialHarness() {
  if (server_) server_->stop();
}

TrialTarget TrialHarness::target() { return TrialTarget{server_->endpoint(), *store_, clock_}; }

}  // namespace sinkhole::eval
