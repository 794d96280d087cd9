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
#include <string>
#include <string_view>

namespace sinkhole::discovery {

struct PageMetadata {
  std::string title;
  std::string description;
  std::string keywords;
  friend bool operator==(const PageMetadata&, const PageMetadata&) = default;
};

/// Title, description and keywords from a page's markup. Description falls
/// back from <meta name=description> to og:description, then to
/// twitter:description; the title falls back to og:title. Entities are
/// decoded and whitespace collapsed; absent fields are empty.
PageMetadata extract_metadata(std::string_view html);

/// Markdown-ish plain text of the page body: headings as '#' lines,
/// paragraphs separated by blank lines, list items as "- " lines, link text
/// without targets. Script, style, navigation and similar chrome is dropped.
/// The result holds at most `cap` code points and is cut at a word boundary
/// when possible.
std::string html_to_summary(std::string_view html, std::size_t cap);

/// Decodes named and numeric character references.
std::string decode_entities(std::string_view text);

/// Replaces whitespace runs with one space and trims the ends.
std::string collapse_whitespace(std::string_view text);

/// Keeps at most `cap` code points, backing off to the last whitespace when
/// the cut would split a word. Falls back to a hard code-point cut for text
/// without spaces.
std::string truncate_at_word(std::string_view text, std::size_t cap);

/// Number of UTF-8 code points (invalid bytes count as one each).
std::size_t utf8_length(std::string_view text);

}  // namespace sinkhole::discovery
