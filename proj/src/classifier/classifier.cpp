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

#include "sinkhole/classifier/classifier.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "sinkhole/common/domain.hpp"
#include "sinkhole/common/hash.hpp"
#include "sinkhole/discovery/html.hpp"

namespace sinkhole::classifier {

using nlohmann::json;

const std::string kDefaultCriteria =
    "Functions like ChatGPT, Grok, meta.ai, or Gemini: It can understand and answer a broad range of general "
    "knowledge questions (e.g., \"Explain photosynthesis\", \"Help me solve this algebra problem\", \"Write an "
    "essay outline\"), or it serves as frontend chat interface for accessing such LLMs";

const std::string kJsonOnlyReminder =
    "Respond with JSON only, exactly in the form {\"verdict\": \"Yes\" or \"No\", \"reason\": \"...\"}, "
    "with no other text.";

namespace {

constexpr std::string_view kPreamble =
    "I need to classify a website based on its primary function. The following is partial information extracted "
    "from the website. ";

constexpr std::string_view kQuestion =
    "My Question: Does this website (i.e. the domain name given in above URL) provide a general-purpose, "
    "generative AI chat service for answering a wide variety of questions? Please check if it meets these "
    "criteria: ";

constexpr std::string_view kFormat =
    " Please answer with \"Yes\" or \"No\" and provide a brief explanation of what the website is, based on the "
    "provided info. the format of your answer should only contain a JSON formatted response as "
    "{\"verdict\": answer, \"reason\": reason}";

std::atomic<std::uint64_t> g_verdict_seq{0};

std::string make_verdict_id(const Verdict& v) {
  const auto seed = v.model_id + '|' + v.dossier_url + '|' + format_iso8601(v.created_at) + '|' +
                    std::to_string(g_verdict_seq++) + '|' + random_hex_token();
  return "v-" + sha256_hex(seed).substr(0, 16);
}

}  // namespace

void ClassifierConfig::validate() const {
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  if (model_id.empty()) throw std::invalid_argument("model_id must not be empty");
}

std::string serialize_for_prompt(const discovery::WebsiteDossier& d, std::size_t content_cap) {
  const json j{{"url", d.url},
               {"title", d.metadata.title},
               {"description", d.metadata.description},
               {"keywords", d.metadata.keywords},
               {"content", discovery::truncate_at_word(d.content, content_cap)}};
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string render_prompt(const discovery::WebsiteDossier& dossier, const ClassifierConfig& config) {
  if (dossier.url.empty()) throw std::invalid_argument("dossier has no URL");
  std::string out;
  out += kPreamble;
  out += serialize_for_prompt(dossier, config.content_cap);
  out += '\n';
  out += kQuestion;
  out += config.criteria_text;
  out += kFormat;
  return out;
}

Verdict classify(const discovery::WebsiteDossier& dossier, const ClassifierConfig& config, ChatClient& client,
                 const Clock& clock) {
  config.validate();
  Verdict v;
  v.model_id = config.model_id;
  v.dossier_url = dossier.url;

  ChatRequest req;
  req.model = config.model_id;
  req.temperature = config.temperature;
  req.timeout = config.request_timeout;
  const auto prompt = render_prompt(dossier, config);
  req.messages.push_back({"user", prompt});

  const auto started = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) req.messages.back().content = prompt + "\n\n" + kJsonOnlyReminder;
    try {
      v.raw_response = client.complete(req);
    } catch (const RequestTimeout& e) {
      v.verdict = VerdictKind::Unknown;
      v.reason = std::string("error: timeout: ") + e.what();
      last_error.clear();
      break;
    } catch (const std::exception& e) {
      v.verdict = VerdictKind::Unknown;
      v.reason = std::string("error: endpoint unreachable: ") + e.what();
      last_error.clear();
      break;
    }
    try {
      auto parsed = parse_verdict(v.raw_response);
      v.verdict = parsed.verdict;
      v.reason = std::move(parsed.reason);
      last_error.clear();
      break;
    } catch (const ParseFailure& e) {
      last_error = e.what();
    }
  }
  if (!last_error.empty()) {
    v.verdict = VerdictKind::Unknown;
    v.reason = "error: unparseable response after " + std::to_string(config.max_retries + 1) +
               " attempt(s): " + last_error;
  }
  v.latency = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - started);
  v.created_at = clock.now();
  v.id = make_verdict_id(v);
  return v;
}

VerdictLog::VerdictLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::app);
  if (!out_) throw std::runtime_error("cannot open verdict log " + path_.string());
}

void VerdictLog::append(const Verdict& v) {
  const auto line = to_json(v).dump(-1, ' ', false, json::error_handler_t::replace);
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
}

std::vector<Verdict> read_verdict_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open verdict log " + path.string());
  std::vector<Verdict> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(verdict_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Millis> BatchResult::latencies(std::size_t model) const {
  std::vector<Millis> out;
  out.reserve(verdicts.at(model).size());
  for (const auto& v : verdicts[model]) out.push_back(v.latency);
  return out;
}

std::size_t BatchResult::total() const {
  std::size_t n = 0;
  for (const auto& row : verdicts) n += row.size();
  return n;
}

BatchResult classify_batch(std::span<const discovery::WebsiteDossier> dossiers, std::span<const ModelRun> runs,
                           const Clock& clock, VerdictLog* log) {
  if (dossiers.empty()) throw std::invalid_argument("classify_batch needs at least one dossier");
  if (runs.empty()) throw std::invalid_argument("classify_batch needs at least one model");
  for (const auto& r : runs) {
    r.config.validate();
    if (!r.client) throw std::invalid_argument("model " + r.config.model_id + " has no client");
  }

  BatchResult result;
  for (const auto& r : runs) result.model_ids.push_back(r.config.model_id);
  for (const auto& d : dossiers) result.site_urls.push_back(d.url);
  result.verdicts.assign(runs.size(), std::vector<Verdict>(dossiers.size()));

  std::vector<std::jthread> workers;
  workers.reserve(runs.size());
  for (std::size_t m = 0; m < runs.size(); ++m) {
    workers.emplace_back([&, m] {
      for (std::size_t s = 0; s < dossiers.size(); ++s) {
        auto v = classify(dossiers[s], runs[m].config, *runs[m].client, clock);
        if (log) log->append(v);
        result.verdicts[m][s] = std::move(v);
      }
    });
  }
  workers.clear();
  return result;
}

std::string verdict_domain(const Verdict& v) {
  auto host = host_of_url(v.dossier_url);
  if (host.empty()) host = require_domain(v.dossier_url);
  if (host.rfind("www.", 0) == 0 && host.find('.', 4) != std::string::npos) host.erase(0, 4);
  return host;
}

std::optional<blocklist::BlockEntry> apply_verdict(blocklist::BlocklistStore& store, const Verdict& v,
                                                   const PolicyConfig& policy) {
  if (v.verdict != VerdictKind::Yes || !policy.auto_block_on_yes) return std::nullopt;
  return store.add_entry(verdict_domain(v), policy.tag, std::nullopt, blocklist::Source::Classifier, v.id);
}

}  // namespace sinkhole::classifier
