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

#include "sinkhole/eval/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::eval {

std::string_view to_string(Label l) { return l == Label::Positive ? "positive" : "negative"; }

std::size_t Dataset::count(Label l) const {
  std::size_t n = 0;
  for (const auto& s : sites) n += s.label == l ? 1 : 0;
  return n;
}

std::map<std::string, std::pair<std::size_t, std::size_t>> Dataset::by_language() const {
  std::map<std::string, std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : sites) {
    auto& slot = out[s.language];
    (s.label == Label::Positive ? slot.first : slot.second)++;
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted field");
  return fields;
}

std::string site_key(const std::string& url) {
  std::string host = url.find("://") != std::string::npos ? host_of_url(url) : canonicalize_domain(url).value_or("");
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);
  return host;
}

Dataset parse_dataset(std::string_view text) {
  Dataset ds;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    std::vector<std::string> f;
    try {
      f = split_csv_line(line);
    } catch (const std::invalid_argument& e) {
      throw FormatError(lineno, e.what());
    }
    for (auto& field : f) field = std::string(trim(field));

    if (!header_seen) {
      if (f != std::vector<std::string>{"url", "label", "language", "category"}) {
        throw FormatError(lineno, "expected header url,label,language,category");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 4) throw FormatError(lineno, "expected 4 fields, got " + std::to_string(f.size()));

    LabeledSite site;
    site.url = f[0];
    const auto label = lowercase_ascii(f[1]);
    if (label == "positive") {
      site.label = Label::Positive;
    } else if (label == "negative") {
      site.label = Label::Negative;
    } else {
      throw FormatError(lineno, "label must be positive or negative, got '" + f[1] + "'");
    }
    site.language = lowercase_ascii(f[2]);
    site.category = f[3];
    if (site.language.empty()) throw FormatError(lineno, "language is empty");

    const auto key = site_key(site.url);
    if (key.empty()) throw FormatError(lineno, "invalid url '" + site.url + "'");
    if (!seen.insert(key).second) throw DuplicateUrl(lineno, site.url);
    ds.sites.push_back(std::move(site));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

}  // namespace sinkhole::eval
