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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sinkhole/common/time.hpp"
#include "sinkhole/discovery/html.hpp"

namespace sinkhole::discovery {

struct FetchStatus {
  enum class Kind { Ok, Blocked, TimedOut, HttpError };
  Kind kind = Kind::Ok;
  int http_code = 0;  // set for HttpError

  static FetchStatus ok() { return {Kind::Ok, 0}; }
  static FetchStatus blocked() { return {Kind::Blocked, 0}; }
  static FetchStatus timed_out() { return {Kind::TimedOut, 0}; }
  static FetchStatus http_error(int code) { return {Kind::HttpError, code}; }

  std::string to_string() const;
  friend bool operator==(const FetchStatus&, const FetchStatus&) = default;
};

/// Per-site record handed to the classifier: the URL, head metadata and a
/// content summary, plus when and how the fetch went.
struct WebsiteDossier {
  std::string url;
  PageMetadata metadata;
  std::string content;
  Instant fetched_at{};
  FetchStatus fetch_status;
  friend bool operator==(const WebsiteDossier&, const WebsiteDossier&) = default;
};

nlohmann::json to_json(const WebsiteDossier& d);
WebsiteDossier dossier_from_json(const nlohmann::json& j);

/// "<host>.json", or "<host>--<8 hex>.json" when the URL carries a path or
/// query, so several pages of one site do not collide. Characters outside
/// [a-z0-9._-] are percent-encoded.
std::string archive_file_name(std::string_view url);

void write_dossier(const std::filesystem::path& dir, const WebsiteDossier& d);

/// All dossiers in `dir`, ordered by file name.
std::vector<WebsiteDossier> read_archive(const std::filesystem::path& dir);

}  // namespace sinkhole::discovery
