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

#include "sinkhole/common/domain.hpp"

#include <algorithm>

namespace sinkhole {

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_valid_dns_name(std::string_view name) {
  if (name.empty() || name.size() > 253) return false;
  std::size_t start = 0;
  while (true) {
    const auto dot = name.find('.', start);
    const auto label = name.substr(start, dot == std::string_view::npos ? name.npos : dot - start);
    if (label.empty() || label.size() > 63) return false;
    if (label.front() == '-' || label.back() == '-') return false;
    for (char c : label) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
      if (!ok) return false;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return true;
}

std::optional<std::string> canonicalize_domain(std::string_view raw) {
  std::string_view s = trim(raw);
  if (const auto scheme = s.find("://"); scheme != std::string_view::npos) {
    s.remove_prefix(scheme + 3);
  }
  if (const auto end = s.find_first_of("/?#"); end != std::string_view::npos) {
    s = s.substr(0, end);
  }
  if (const auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
  if (const auto colon = s.rfind(':'); colon != std::string_view::npos) {
    const auto port = s.substr(colon + 1);
    if (!std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    s = s.substr(0, colon);
  }
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);

  std::string name = lowercase_ascii(s);
  if (!is_valid_dns_name(name)) return std::nullopt;
  const auto last_dot = name.rfind('.');
  if (last_dot == std::string::npos) return std::nullopt;
  const std::string_view tld = std::string_view(name).substr(last_dot + 1);
  if (std::all_of(tld.begin(), tld.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  return name;
}

std::string require_domain(std::string_view raw) {
  auto d = canonicalize_domain(raw);
  if (!d) throw InvalidDomain(std::string(raw));
  return *std::move(d);
}

std::string host_of_url(std::string_view url) {
  const auto scheme = url.find("://");
  if (scheme == std::string_view::npos) return {};
  return canonicalize_domain(url).value_or(std::string{});
}

bool is_same_or_subdomain(std::string_view name, std::string_view domain) {
  if (name.size() == domain.size()) return name == domain;
  if (name.size() < domain.size() + 1) return false;
  return name.ends_with(domain) && name[name.size() - domain.size() - 1] == '.';
}

std::vector<std::string_view> label_suffixes(std::string_view name) {
  std::vector<std::string_view> out;
  if (name.empty()) return out;
  out.push_back(name);
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] == '.' && i + 1 < name.size()) out.push_back(name.substr(i + 1));
  }
  return out;
}

}  // namespace sinkhole
