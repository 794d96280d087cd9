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
#include <vector>

namespace sinkhole {

class InvalidDomain : public std::invalid_argument {
 public:
  explicit InvalidDomain(const std::string& raw)
      : std::invalid_argument("invalid domain: '" + raw + "'") {}
};

std::string lowercase_ascii(std::string_view s);

std::string_view trim(std::string_view s);

/// True for a lowercase, dot-separated name without trailing dot whose labels
/// are 1..63 octets of [a-z0-9_-] (no leading/trailing hyphen) and whose total
/// length is at most 253.
bool is_valid_dns_name(std::string_view name);

/// Reduces user input ("https://ChatGPT.com:443/c/x", "poe.com.") to the bare
/// lowercase host. Requires at least two labels and a non-numeric TLD so that
/// IP literals and single labels are rejected. Returns nullopt when the input
/// does not reduce to a valid name.
std::optional<std::string> canonicalize_domain(std::string_view raw);

/// Like canonicalize_domain, but throws InvalidDomain.
std::string require_domain(std::string_view raw);

/// Host part of an http(s) URL, canonicalized; empty if none.
std::string host_of_url(std::string_view url);

/// True when `name` equals `domain` or ends with "." + domain.
bool is_same_or_subdomain(std::string_view name, std::string_view domain);

/// `name` followed by each parent on a label boundary, longest first:
/// "a.b.c" -> {"a.b.c", "b.c", "c"}.
std::vector<std::string_view> label_suffixes(std::string_view name);

}  // namespace sinkhole
