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

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sinkhole::classifier {

class EndpointUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RequestTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  std::chrono::milliseconds timeout{120000};
};

/// One non-streaming chat-completion round trip. Returns the assistant text.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

/// Talks to an OpenAI-compatible server (llama.cpp, vLLM, LM Studio, Ollama's
/// /v1 routes). Ollama's native /api/chat and /api/generate response shapes
/// are understood too.
class HttpChatClient final : public ChatClient {
 public:
  HttpChatClient(std::string base_url, std::string path = "/v1/chat/completions", std::string api_key = {});
  std::string complete(const ChatRequest& request) override;

  /// Pulls the assistant text out of a response body. Throws
  /// std::runtime_error when no known shape matches.
  static std::string extract_text(const std::string& body);

 private:
  std::string base_url_;
  std::string path_;
  std::string api_key_;
};

/// Deterministic replacement for a model server. Rules match the host of the
/// URL found in the prompt by label suffix; the first matching rule answers.
class StubChatClient final : public ChatClient {
 public:
  struct Rule {
    std::string host_suffix;
    std::string response;
  };

  explicit StubChatClient(std::vector<Rule> rules, std::string fallback = R"({"verdict":"No","reason":"No chat service evident."})");

  std::string complete(const ChatRequest& request) override;

  /// Every call fails as unreachable after this many successful ones.
  void die_after(std::size_t calls) { die_after_ = calls; }
  /// Responses for the next calls, consumed before rules apply.
  void queue(std::vector<std::string> responses);
  std::size_t calls() const { return calls_.load(); }
  const std::vector<ChatRequest>& requests() const { return requests_; }

  /// Loads rules from JSON: [{"host_suffix": "...", "response": "..."}].
  static std::vector<Rule> load_rules(const std::string& path);

 private:
  std::vector<Rule> rules_;
  std::string fallback_;
  std::size_t die_after_ = static_cast<std::size_t>(-1);
  std::atomic<std::size_t> calls_{0};
  std::mutex mu_;
  std::vector<std::string> queued_;
  std::vector<ChatRequest> requests_;
};

}  // namespace sinkhole::classifier
