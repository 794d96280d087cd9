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

#include "sinkhole/classifier/chat.hpp"

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <regex>

#include <json.hpp>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::classifier {

using nlohmann::json;

HttpChatClient::HttpChatClient(std::string base_url, std::string path, std::string api_key)
    : base_url_(std::move(base_url)), path_(std::move(path)), api_key_(std::move(api_key)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (path_.empty() || path_.front() != '/') path_.insert(path_.begin(), '/');
}

std::string HttpChatClient::extract_text(const std::string& body) {
  const auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::runtime_error("response is not a JSON object");
  // OpenAI: choices[0].message.content (or .text for legacy completions).
  if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& c = j["choices"][0];
    if (c.contains("message") && c["message"].contains("content") && c["message"]["content"].is_string()) {
      return c["message"]["content"].get<std::string>();
    }
    if (c.contains("text") && c["text"].is_string()) return c["text"].get<std::string>();
  }
  // Ollama /api/chat
  if (j.contains("message") && j["message"].is_object() && j["message"].contains("content")) {
    return j["message"]["content"].get<std::string>();
  }
  // Ollama /api/generate
  if (j.contains("response") && j["response"].is_string()) return j["response"].get<std::string>();
  if (j.contains("error")) throw std::runtime_error("server error: " + j["error"].dump());
  throw std::runtime_error("unrecognized chat response shape");
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  const json body{{"model", request.model},
                  {"messages", messages},
                  {"temperature", request.temperature},
                  {"stream", false},
                  {"options", {{"temperature", request.temperature}}}};

  httplib::Client cli(base_url_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = cli.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw RequestTimeout("chat request to " + base_url_ + " failed: " + httplib::to_string(err));
    }
    throw EndpointUnreachable("chat request to " + base_url_ + " failed: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw EndpointUnreachable("chat endpoint returned HTTP " + std::to_string(res->status));
  }
  try {
    return extract_text(res->body);
  } catch (const std::runtime_error& e) {
    throw EndpointUnreachable(e.what());
  }
}

StubChatClient::StubChatClient(std::vector<Rule> rules, std::string fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

void StubChatClient::queue(std::vector<std::string> responses) {
  std::lock_guard lock(mu_);
  queued_.insert(queued_.end(), responses.begin(), responses.end());
}

std::string StubChatClient::complete(const ChatRequest& request) {
  const auto n = calls_++;
  {
    std::lock_guard lock(mu_);
    requests_.push_back(request);
  }
  if (n >= die_after_) throw EndpointUnreachable("stub endpoint is down");
  {
    std::lock_guard lock(mu_);
    if (!queued_.empty()) {
      auto r = queued_.front();
      queued_.erase(queued_.begin());
      return r;
    }
  }
  const std::string& prompt = request.messages.empty() ? std::string{} : request.messages.back().content;
  static const std::regex kUrl(R"re("url"\s*:\s*"([^"]+)")re");
  std::smatch m;
  if (!std::regex_search(prompt, m, kUrl)) return fallback_;
  const auto host = host_of_url(m[1].str());
  for (const auto& rule : rules_) {
    if (is_same_or_subdomain(host, rule.host_suffix)) return rule.response;
  }
  return fallback_;
}

std::vector<StubChatClient::Rule> StubChatClient::load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stub rules " + path);
  const auto j = json::parse(in);
  std::vector<Rule> rules;
  for (const auto& r : j) rules.push_back({r.at("host_suffix").get<std::string>(), r.at("response").get<std::string>()});
  return rules;
}

}  // namespace sinkhole::classifier
