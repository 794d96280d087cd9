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
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sinkhole/blocklist/store.hpp"
#include "sinkhole/classifier/chat.hpp"
#include "sinkhole/classifier/verdict.hpp"
#include "sinkhole/common/time.hpp"
#include "sinkhole/discovery/dossier.hpp"

namespace sinkhole::classifier {

/// Criteria block shown to the model. Operators may extend it.
extern const std::string kDefaultCriteria;

/// Appended to the prompt when the previous answer could not be parsed.
extern const std::string kJsonOnlyReminder;

struct ClassifierConfig {
  std::string endpoint = "http://127.0.0.1:11434";
  std::string path = "/v1/chat/completions";
  std::string model_id = "llama3";
  double temperature = 0.0;
  int max_retries = 2;
  std::chrono::milliseconds request_timeout{120000};
  std::string criteria_text = kDefaultCriteria;
  // Content longer than this (code points) is cut before prompting.
  std::size_t content_cap = 4000;

  /// Throws std::invalid_argument on negative retries or temperature.
  void validate() const;
};

/// The dossier as it appears inside the prompt: URL, metadata and content.
std::string serialize_for_prompt(const discovery::WebsiteDossier& dossier, std::size_t content_cap);

std::string render_prompt(const discovery::WebsiteDossier& dossier, const ClassifierConfig& config);

/// Queries the model once (plus retries on unparseable output). Never
/// throws for transport problems: those become Unknown verdicts whose
/// reason starts with "error:".
Verdict classify(const discovery::WebsiteDossier& dossier, const ClassifierConfig& config, ChatClient& client,
                 const Clock& clock);

/// Append-only JSON-lines record of verdicts, safe to share across threads.
class VerdictLog {
 public:
  explicit VerdictLog(std::filesystem::path path);
  void append(const Verdict& v);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
  std::ofstream out_;
};

std::vector<Verdict> read_verdict_log(const std::filesystem::path& path);

struct ModelRun {
  ClassifierConfig config;
  ChatClient* client;
};

struct BatchResult {
  std::vector<std::string> model_ids;
  std::vector<std::string> site_urls;
  // verdicts[model][site]
  std::vector<std::vector<Verdict>> verdicts;

  std::vector<Millis> latencies(std::size_t model) const;
  std::size_t total() const;
};

/// Every (model, site) pair. Models run in parallel, sites within a model
/// run in order. A dead endpoint only affects its own row.
BatchResult classify_batch(std::span<const discovery::WebsiteDossier> dossiers, std::span<const ModelRun> runs,
                           const Clock& clock, VerdictLog* log = nullptr);

struct PolicyConfig {
  bool auto_block_on_yes = true;
  std::string tag{blocklist::kAiSinkholeTag};
};

/// Domain a verdict would block: the dossier host without a leading "www.".
std::string verdict_domain(const Verdict& v);

/// The only path from verdicts to the blocklist. Yes verdicts are added
/// under the policy tag when auto-blocking is on; No and Unknown never are.
std::optional<blocklist::BlockEntry> apply_verdict(blocklist::BlocklistStore& store, const Verdict& v,
                                                   const PolicyConfig& policy);

}  // namespace sinkhole::classifier
