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

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sinkhole::eval {

enum class Label { Positive, Negative };

std::string_view to_string(Label l);

struct LabeledSite {
  std::string url;
  Label label = Label::Negative;
  std::string language;
  std::string category;
  friend bool operator==(const LabeledSite&, const LabeledSite&) = default;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateUrl : public std::runtime_error {
 public:
  DuplicateUrl(std::size_t line, const std::string& url)
      : std::runtime_error("line " + std::to_string(line) + ": duplicate url " + url), line_(line), url_(url) {}
  std::size_t line() const { return line_; }
  const std::string& url() const { return url_; }

 private:
  std::size_t line_;
  std::string url_;
};

struct Dataset {
  std::vector<LabeledSite> sites;

  std::size_t count(Label l) const;
  /// language -> {positives, negatives}
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_language() const;
};

/// CSV with header `url,label,language,category`. Labels are "positive" or
/// "negative" (case-insensitive). Fields may be double-quoted. URLs are
/// compared by host, so "https://a.com/" and "a.com" collide.
Dataset parse_dataset(std::string_view text);
Dataset load_dataset(const std::filesystem::path& path);

/// Host a URL or bare domain refers to, without a leading "www.". Empty when
/// no host can be extracted.
std::string site_key(const std::string& url);

/// Splits one CSV record. Quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace sinkhole::eval
