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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace sinkhole::discovery {

/// Public-suffix matcher using the publicsuffix.org rule semantics (plain,
/// wildcard "*." and exception "!" rules, implicit "*" default).
class PublicSuffixList {
 public:
  /// Small built-in snapshot covering common multi-label suffixes.
  static const PublicSuffixList& embedded();

  /// Parses a public_suffix_list.dat style document.
  static PublicSuffixList parse(std::string_view text);
  static PublicSuffixList load(const std::filesystem::path& path);

  /// Public suffix of a canonical name, e.g. "co.uk" for "a.b.co.uk".
  std::string public_suffix(std::string_view name) const;

  /// Suffix plus one label ("b.co.uk"); nullopt when `name` is itself a
  /// public suffix.
  std::optional<std::string> registrable_domain(std::string_view name) const;

  std::size_t rule_count() const { return rules_.size() + wildcards_.size() + exceptions_.size(); }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // stored without "*."
  std::unordered_set<std::string> exceptions_;  // stored without "!"
};

}  // namespace sinkhole::discovery
