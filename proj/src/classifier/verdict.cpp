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

#include "sinkhole/classifier/verdict.hpp"

#include <vector>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::classifier {

using nlohmann::json;

std::string_view to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Yes:
      return "yes";
    case VerdictKind::No:
      return "no";
    case VerdictKind::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<VerdictKind> verdict_kind_from_string(std::string_view s) {
  const auto v = lowercase_ascii(trim(s));
  if (v == "yes") return VerdictKind::Yes;
  if (v == "no") return VerdictKind::No;
  if (v == "unknown") return VerdictKind::Unknown;
  return std::nullopt;
}

json to_json(const Verdict& v) {
  return json{{"id", v.id},
              {"verdict", to_string(v.verdict)},
              {"reason", v.reason},
              {"model_id", v.model_id},
              {"latency_ms", v.latency.count()},
              {"raw_response", v.raw_response},
              {"dossier_url", v.dossier_url},
              {"created_at", format_iso8601(v.created_at)}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.id = j.at("id").get<std::string>();
  const auto kind = verdict_kind_from_string(j.at("verdict").get<std::string>());
  if (!kind) throw std::runtime_error("unknown verdict value in record " + v.id);
  v.verdict = *kind;
  v.reason = j.value("reason", "");
  v.model_id = j.at("model_id").get<std::string>();
  v.latency = Millis{j.value("latency_ms", std::int64_t{0})};
  v.raw_response = j.value("raw_response", "");
  v.dossier_url = j.at("dossier_url").get<std::string>();
  const auto t = parse_iso8601(j.at("created_at").get<std::string>());
  if (!t) throw std::runtime_error("bad created_at in record " + v.id);
  v.created_at = *t;
  return v;
}

namespace {

constexpr std::string_view kOpen = "<think>";
constexpr std::string_view kClose = "</think>";

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from = 0) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool eq = true;
    for (std::size_t k = 0; k < needle.size() && eq; ++k) {
      char c = hay[i + k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      eq = c == needle[k];
    }
    if (eq) return i;
  }
  return std::string_view::npos;
}

std::string strip_fences(std::string_view text) {
  // Drops ``` lines (with or without a language tag), keeps what is inside.
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = text.substr(pos, eol - pos);
    if (trim(line).substr(0, 3) != "```") {
      out.append(line);
      out.push_back('\n');
    }
    pos = eol + 1;
  }
  return out;
}

// Balanced {...} spans, skipping braces inside strings.
std::vector<std::string_view> json_object_candidates(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        out.push_back(text.substr(start, i - start + 1));
        break;
      }
    }
  }
  return out;
}

const json* field_ci(const json& obj, std::string_view key) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (lowercase_ascii(it.key()) == key) return &it.value();
  }
  return nullptr;
}

}  // namespace

std::string strip_reasoning(std::string_view raw) {
  std::string text(raw);
  for (;;) {
    const auto open = find_ci(text, kOpen);
    const auto close = find_ci(text, kClose);
    if (open == std::string::npos && close == std::string::npos) break;
    if (close != std::string::npos && (open == std::string::npos || close < open)) {
      // Some servers drop the opening tag but keep the closing one.
      text.erase(0, close + kClose.size());
      continue;
    }
    const auto end = find_ci(text, kClose, open + kOpen.size());
    if (end == std::string::npos) {
      text.erase(open);
      break;
    }
    text.erase(open, end + kClose.size() - open);
  }
  return text;
}

ParsedVerdict parse_verdict(std::string_view raw) {
  const auto cleaned = strip_fences(strip_reasoning(raw));
  const auto candidates = json_object_candidates(cleaned);
  if (candidates.empty()) throw ParseFailure("no JSON object in model output");
  std::string last_problem = "malformed JSON object";
  for (const auto candidate : candidates) {
    const auto j = json::parse(candidate, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    const json* verdict = field_ci(j, "verdict");
    if (!verdict) {
      last_problem = "JSON object has no verdict field";
      continue;
    }
    if (!verdict->is_string()) throw ParseFailure("verdict is not a string");
    const auto value = lowercase_ascii(trim(verdict->get<std::string>()));
    ParsedVerdict out{};
    if (value == "yes") {
      out.verdict = VerdictKind::Yes;
    } else if (value == "no") {
      out.verdict = VerdictKind::No;
    } else {
      throw ParseFailure("verdict '" + verdict->get<std::string>() + "' is neither yes nor no");
    }
    const json* reason = field_ci(j, "reason");
    if (!reason || !reason->is_string() || trim(reason->get<std::string>()).empty()) {
      throw ParseFailure("verdict without a reason");
    }
    out.reason = std::string(trim(reason->get<std::string>()));
    return out;
  }
  throw ParseFailure(last_problem);
}

}  // namespace sinkhole::classifier
