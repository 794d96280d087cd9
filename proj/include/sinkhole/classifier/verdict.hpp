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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sinkhole/common/time.hpp"

namespace sinkhole::classifier {

enum class VerdictKind { Yes, No, Unknown };

std::string_view to_string(VerdictKind v);
std::optional<VerdictKind> verdict_kind_from_string(std::string_view s);

struct Verdict {
  std::string id;
  VerdictKind verdict = VerdictKind::Unknown;
  std::string reason;
  std::string model_id;
  Millis latency{0};
  std::string raw_response;
  std::string dossier_url;
  Instant created_at{};
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

class ParseFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedVerdict {
  VerdictKind verdict;
  std::string reason;
  friend bool operator==(const ParsedVerdict&, const ParsedVerdict&) = default;
};

/// Extracts {"verdict", "reason"} from raw model output. Reasoning traces in
/// <think> tags and markdown fences are stripped first; the first balanced
/// JSON object carrying a verdict key wins. Keys and the yes/no value are
/// case-insensitive. Throws ParseFailure when nothing usable is found.
ParsedVerdict parse_verdict(std::string_view raw);

/// Removes <think>...</think> blocks. An unmatched closing tag drops
/// everything before it; an unclosed opening tag drops everything after.
std::string strip_reasoning(std::string_view raw);

}  // namespace sinkhole::classifier
