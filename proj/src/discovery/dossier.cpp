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

#include "sinkhole/discovery/dossier.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sinkhole/common/domain.hpp"
#include "sinkhole/common/hash.hpp"

namespace sinkhole::discovery {

using nlohmann::json;

std::string FetchStatus::to_string() const {
  switch (kind) {
    case Kind::Ok:
      return "ok";
    case Kind::Blocked:
      return "blocked";
    case Kind::TimedOut:
      return "timed_out";
    case Kind::HttpError:
      return "http_error";
  }
  return "ok";
}

json to_json(const WebsiteDossier& d) {
  return json{{"url", d.url},
              {"metadata",
               {{"title", d.metadata.title}, {"description", d.metadata.description}, {"keywords", d.metadata.keywords}}},
              {"content", d.content},
              {"fetched_at", format_iso8601(d.fetched_at)},
              {"fetch_status", d.fetch_status.to_string()},
              {"http_status", d.fetch_status.kind == FetchStatus::Kind::HttpError ? json(d.fetch_status.http_code)
                                                                                   : json(nullptr)}};
}

WebsiteDossier dossier_from_json(const json& j) {
  WebsiteDossier d;
  d.url = j.at("url").get<std::string>();
  if (j.contains("metadata")) {
    const auto& m = j["metadata"];
    d.metadata.title = m.value("title", "");
    d.metadata.description = m.value("description", "");
    d.metadata.keywords = m.value("keywords", "");
  }
  d.content = j.value("content", "");
  if (j.contains("fetched_at")) {
    const auto t = parse_iso8601(j["fetched_at"].get<std::string>());
    if (!t) throw std::runtime_error("bad fetched_at in dossier for " + d.url);
    d.fetched_at = *t;
  }
  const auto status = j.value("fetch_status", "ok");
  if (status == "ok") {
    d.fetch_status = FetchStatus::ok();
  } else if (status == "blocked") {
    d.fetch_status = FetchStatus::blocked();
  } else if (status == "timed_out") {
    d.fetch_status = FetchStatus::timed_out();
  } else if (status == "http_error") {
    d.fetch_status = FetchStatus::http_error(j.value("http_status", 0));
  } else {
    throw std::runtime_error("unknown fetch_status '" + status + "'");
  }
  return d;
}

std::string archive_file_name(std::string_view url) {
  std::string host = host_of_url(url);
  if (host.empty()) host = "invalid";
  std::string name;
  for (char c : host) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    if (safe) {
      name.push_back(c);
    } else {
      static constexpr char kHex[] = "0123456789ABCDEF";
      name += '%';
      name += kHex[(static_cast<unsigned char>(c) >> 4) & 0xf];
      name += kHex[static_cast<unsigned char>(c) & 0xf];
    }
  }
  const auto scheme = url.find("://");
  const auto rest = scheme == std::string_view::npos ? url : url.substr(scheme + 3);
  const auto path_start = rest.find_first_of("/?#");
  const auto path = path_start == std::string_view::npos ? std::string_view{} : rest.substr(path_start);
  if (!path.empty() && path != "/") name += "--" + sha256_hex(url).substr(0, 8);
  return name + ".json";
}

void write_dossier(const std::filesystem::path& dir, const WebsiteDossier& d) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / archive_file_name(d.url), std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write dossier for " + d.url);
  out << to_json(d).dump(2) << '\n';
}

std::vector<WebsiteDossier> read_archive(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<WebsiteDossier> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(dossier_from_json(json::parse(in)));
    } catch (const std::exception& e) {
      throw std::runtime_error(f.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sinkhole::discovery
