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

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinkhole/blocklist/store.hpp"
#include "sinkhole/common/time.hpp"
#include "sinkhole/dns/net.hpp"

namespace sinkhole::dns {
class DnsServer;
class FakeUpstreamServer;
class NetworkUpstream;
class QueryLog;
class Resolver;
}  // namespace sinkhole::dns

namespace sinkhole::eval {

class TrialSetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Phase { Pre, During, Post };
std::string_view to_string(Phase p);

struct PhaseResult {
  Phase phase = Phase::Pre;
  Instant start{};
  Instant end{};
  std::size_t positives_total = 0;
  std::size_t positives_blocked = 0;
  std::size_t negatives_total = 0;
  std::size_t negatives_blocked = 0;
  std::size_t failures = 0;
  // Domains seen sinkholed in this phase, sorted.
  std::vector<std::string> blocked_domains;
};

struct PhaseReport {
  std::string tag;
  Window window{};
  std::vector<PhaseResult> phases;

  /// Pre and post: nothing blocked. During: every positive and no negative
  /// blocked. No failures anywhere.
  bool meets_expectations() const;
  std::size_t blocked_total() const;
  nlohmann::json to_json() const;
  std::string to_table() const;
};

/// What the trial drives: a resolver reachable over the network whose
/// blocklist and clock the trial controls.
struct TrialTarget {
  dns::Endpoint resolver;
  blocklist::BlocklistStore& store;
  ManualClock& clock;
};

struct TrialOptions {
  std::string tag{blocklist::kAiSinkholeTag};
  // Browsing rounds per phase; each round resolves every domain once.
  std::size_t rounds_per_phase = 1;
  std::chrono::milliseconds query_timeout{1000};
  // Wait out each clock step in wall time instead of jumping.
  bool real_time = false;
  // Called when a phase begins, after the clock is moved into it.
  std::function<void(Phase, Instant)> on_phase_start;
};

/// Three equal phases starting at the clock's current time T0: before the
/// window, inside [T0+d, T0+2d) and after it. Positives are added under the
/// tag with that window; a domain counts as blocked when its A answer is
/// 0.0.0.0. Throws TrialSetupError when the resolver does not answer.
PhaseReport run_blocking_trial(TrialTarget target, const std::vector<std::string>& positives,
                               const std::vector<std::string>& negatives, std::chrono::milliseconds phase_duration,
                               const TrialOptions& options = {});

/// Self-contained environment: simulated clock, in-memory store, scripted
/// upstream and a resolver listening on loopback.
class TrialHarness {
 public:
  explicit TrialHarness(Instant start);
  ~TrialHarness();

  TrialTarget target();
  blocklist::BlocklistStore& store() { return *store_; }
  ManualClock& clock() { return clock_; }
  dns::Resolver& resolver() { return *resolver_; }
  dns::QueryLog& query_log() { return *log_; }

 private:
  ManualClock clock_;
  std::unique_ptr<blocklist::BlocklistStore> store_;
  std::unique_ptr<dns::FakeUpstreamServer> upstream_server_;
  std::unique_ptr<dns::NetworkUpstream> upstream_;
  std::unique_ptr<dns::QueryLog> log_;
  std::unique_ptr<dns::Resolver> resolver_;
  std::unique_ptr<dns::DnsServer> server_;
};

}  // namespace sinkhole::eval
