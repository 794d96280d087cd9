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

#include "sinkhole/discovery/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::discovery {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) cp = 0xfffd;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> table{
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
      {"nbsp", 0xa0},    {"copy", 0xa9},    {"reg", 0xae},     {"trade", 0x2122}, {"hellip", 0x2026},
      {"mdash", 0x2014}, {"ndash", 0x2013}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201c},
      {"rdquo", 0x201d}, {"laquo", 0xab},   {"raquo", 0xbb},   {"middot", 0xb7},  {"bull", 0x2022},
      {"euro", 0x20ac},  {"pound", 0xa3},   {"yen", 0xa5},     {"cent", 0xa2},    {"sect", 0xa7},
      {"deg", 0xb0},     {"times", 0xd7},   {"divide", 0xf7},  {"iexcl", 0xa1},   {"iquest", 0xbf},
      {"aacute", 0xe1},  {"eacute", 0xe9},  {"iacute", 0xed},  {"oacute", 0xf3},  {"uacute", 0xfa},
      {"Aacute", 0xc1},  {"Eacute", 0xc9},  {"Iacute", 0xcd},  {"Oacute", 0xd3},  {"Uacute", 0xda},
      {"agrave", 0xe0},  {"egrave", 0xe8},  {"ograve", 0xf2},  {"ugrave", 0xf9},  {"Agrave", 0xc0},
      {"acirc", 0xe2},   {"ecirc", 0xea},   {"ocirc", 0xf4},   {"icirc", 0xee},   {"ucirc", 0xfb},
      {"atilde", 0xe3},  {"otilde", 0xf5},  {"ntilde", 0xf1},  {"Ntilde", 0xd1},  {"ccedil", 0xe7},
      {"Ccedil", 0xc7},  {"auml", 0xe4},    {"ouml", 0xf6},    {"uuml", 0xfc},    {"Auml", 0xc4},
      {"Ouml", 0xd6},    {"Uuml", 0xdc},    {"szlig", 0xdf},   {"euml", 0xeb},    {"iuml", 0xef},
      {"ordf", 0xaa},    {"ordm", 0xba},    {"zwj", 0x200d},   {"zwnj", 0x200c},  {"shy", 0xad},
  };
  return table;
}

// Attempts to decode a reference starting at text[i] == '&'. Returns the
// number of bytes consumed, 0 if it is not a reference.
std::size_t decode_one(std::string_view text, std::size_t i, std::string& out) {
  const std::size_t limit = std::min(text.size(), i + 34);
  if (i + 1 < text.size() && text[i + 1] == '#') {
    std::size_t j = i + 2;
    int base = 10;
    if (j < text.size() && (text[j] == 'x' || text[j] == 'X')) {
      base = 16;
      ++j;
    }
    const std::size_t start = j;
    while (j < limit && (std::isxdigit(static_cast<unsigned char>(text[j])) != 0) &&
           (base == 16 || (text[j] >= '0' && text[j] <= '9'))) {
      ++j;
    }
    if (j == start) return 0;
    std::uint32_t cp = 0;
    std::from_chars(text.data() + start, text.data() + j, cp, base);
    append_utf8(out, cp);
    if (j < text.size() && text[j] == ';') ++j;
    return j - i;
  }
  std::size_t j = i + 1;
  while (j < limit && (is_alpha(text[j]) || (text[j] >= '0' && text[j] <= '9'))) ++j;
  if (j == i + 1) return 0;
  const auto name = text.substr(i + 1, j - i - 1);
  const auto& table = named_entities();
  auto it = table.find(name);
  if (it == table.end()) return 0;
  append_utf8(out, it->second == 0xa0 ? ' ' : it->second);
  if (j < text.size() && text[j] == ';') ++j;
  return j - i;
}

// --- tokenizer -------------------------------------------------------------

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
  bool self_closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;  // names lowercase, values raw

  std::optional<std::string_view> attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return std::string_view(v);
    }
    return std::nullopt;
  }
};

constexpr std::array<std::string_view, 5> kRawTextElements{"script", "style", "textarea", "title", "xmp"};

bool is_raw_text(std::string_view name) {
  return std::find(kRawTextElements.begin(), kRawTextElements.end(), name) != kRawTextElements.end();
}

constexpr std::array<std::string_view, 14> kVoidElements{"area", "base", "br",   "col",  "embed",  "hr",    "img",
                                                         "input", "link", "meta", "param", "source", "track", "wbr"};

bool is_void(std::string_view name) {
  return std::find(kVoidElements.begin(), kVoidElements.end(), name) != kVoidElements.end();
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool eq = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      char a = hay[i + k];
      if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
      if (a != needle[k]) {
        eq = false;
        break;
      }
    }
    if (eq) return i;
  }
  return std::string_view::npos;
}

// Parses a tag starting at html[i] == '<'. On success sets `end` past '>'.
std::optional<Tag> parse_tag(std::string_view html, std::size_t i, std::size_t& end) {
  Tag tag;
  std::size_t j = i + 1;
  if (j < html.size() && html[j] == '/') {
    tag.closing = true;
    ++j;
  }
  if (j >= html.size() || !is_alpha(html[j])) return std::nullopt;
  const std::size_t name_start = j;
  while (j < html.size() && !is_space(html[j]) && html[j] != '>' && html[j] != '/') ++j;
  tag.name = lowercase_ascii(html.substr(name_start, j - name_start));

  while (j < html.size() && html[j] != '>') {
    if (is_space(html[j])) {
      ++j;
      continue;
    }
    if (html[j] == '/') {
      tag.self_closing = true;
      ++j;
      continue;
    }
    const std::size_t an = j;
    while (j < html.size() && !is_space(html[j]) && html[j] != '=' && html[j] != '>' && html[j] != '/') ++j;
    std::string key = lowercase_ascii(html.substr(an, j - an));
    while (j < html.size() && is_space(html[j])) ++j;
    std::string value;
    if (j < html.size() && html[j] == '=') {
      ++j;
      while (j < html.size() && is_space(html[j])) ++j;
      if (j < html.size() && (html[j] == '"' || html[j] == '\'')) {
        const char q = html[j++];
        const std::size_t vs = j;
        while (j < html.size() && html[j] != q) ++j;
        value = std::string(html.substr(vs, j - vs));
        if (j < html.size()) ++j;
      } else {
        const std::size_t vs = j;
        while (j < html.size() && !is_space(html[j]) && html[j] != '>') ++j;
        value = std::string(html.substr(vs, j - vs));
      }
    }
    if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
    if (j < html.size() && html[j] != '>') tag.self_closing = false;
  }
  end = j < html.size() ? j + 1 : html.size();
  return tag;
}

// Visitor receives on_tag(const Tag&) and on_text(std::string_view, bool raw).
template <class Visitor>
void tokenize(std::string_view html, Visitor&& v) {
  std::size_t i = 0;
  std::size_t text_start = 0;
  auto flush_text = [&](std::size_t upto) {
    if (upto > text_start) v.on_text(html.substr(text_start, upto - text_start), false);
  };
  while (i < html.size()) {
    if (html[i] != '<') {
      ++i;
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      flush_text(i);
      const auto close = html.find("-->", i + 4);
      i = close == std::string_view::npos ? html.size() : close + 3;
      text_start = i;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      flush_text(i);
      const auto close = html.find('>', i);
      i = close == std::string_view::npos ? html.size() : close + 1;
      text_start = i;
      continue;
    }
    std::size_t end = 0;
    auto tag = parse_tag(html, i, end);
    if (!tag) {
      ++i;
      continue;
    }
    flush_text(i);
    v.on_tag(*tag);
    i = end;
    if (!tag->closing && !tag->self_closing && is_raw_text(tag->name)) {
      const std::string closer = "</" + tag->name;
      auto close = find_ci(html, closer, i);
      if (close == std::string_view::npos) close = html.size();
      v.on_text(html.substr(i, close - i), true);
      Tag end_tag;
      end_tag.name = tag->name;
      end_tag.closing = true;
      v.on_tag(end_tag);
      const auto gt = html.find('>', close);
      i = gt == std::string_view::npos ? html.size() : gt + 1;
    }
    text_start = i;
  }
  flush_text(html.size());
}

// --- metadata --------------------------------------------------------------

struct MetadataVisitor {
  std::optional<std::string> title;
  std::optional<std::string> og_title;
  std::optional<std::string> description;
  std::optional<std::string> og_description;
  std::optional<std::string> twitter_description;
  std::optional<std::string> keywords;
  int svg_depth = 0;
  bool in_title = false;

  void on_tag(const Tag& t) {
    if (t.name == "svg") {
      if (t.closing) {
        svg_depth = std::max(0, svg_depth - 1);
      } else if (!t.self_closing) {
        ++svg_depth;
      }
      return;
    }
    if (t.name == "title") {
      in_title = !t.closing && svg_depth == 0 && !title;
      return;
    }
    if (t.name != "meta" || t.closing) return;
    const auto content = t.attr("content");
    if (!content) return;
    auto key = lowercase_ascii(t.attr("name").value_or(t.attr("property").value_or("")));
    auto store = [&](std::optional<std::string>& slot) {
      if (!slot) slot = collapse_whitespace(decode_entities(*content));
    };
    if (key == "description") store(description);
    else if (key == "og:description") store(og_description);
    else if (key == "twitter:description") store(twitter_description);
    else if (key == "keywords") store(keywords);
    else if (key == "og:title") store(og_title);
  }

  void on_text(std::string_view text, bool) {
    if (in_title) {
      title = collapse_whitespace(decode_entities(text));
      in_title = false;
    }
  }
};

std::string first_non_empty(std::initializer_list<const std::optional<std::string>*> candidates) {
  for (const auto* c : candidates) {
    if (*c && !(*c)->empty()) return **c;
  }
  return {};
}

// --- summary ---------------------------------------------------------------

constexpr std::array<std::string_view, 13> kSkippedElements{
    "script", "style", "noscript", "template", "svg", "nav", "head", "iframe", "footer",
    "aside",  "title", "select",   "object"};

bool is_skipped(std::string_view name) {
  return std::find(kSkippedElements.begin(), kSkippedElements.end(), name) != kSkippedElements.end();
}

constexpr std::array<std::string_view, 29> kBlockElements{
    "p",       "div",    "section", "article", "main",       "header", "ul",      "ol",     "dl",     "dd",
    "dt",      "table",  "tr",      "blockquote", "pre",     "br",     "hr",      "figure", "figcaption",
    "address", "form",   "fieldset", "details", "summary",   "body",   "html",    "label",  "caption",
    "center"};

bool is_block(std::string_view name) {
  return std::find(kBlockElements.begin(), kBlockElements.end(), name) != kBlockElements.end();
}

int heading_level(std::string_view name) {
  if (name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6') return name[1] - '0';
  return 0;
}

// Elements that may legitimately appear inside <head>.
bool head_content(std::string_view name) {
  static constexpr std::array<std::string_view, 9> kHead{"meta",  "link",     "title",    "script", "style",
                                                         "base",  "noscript", "template", "head"};
  return std::find(kHead.begin(), kHead.end(), name) != kHead.end();
}

struct SummaryVisitor {
  enum class Kind { Paragraph, Heading, ListItem };
  struct Block {
    Kind kind;
    int level;
    std::string text;
  };

  std::vector<Block> blocks;
  std::string buffer;
  Kind kind = Kind::Paragraph;
  int level = 0;

  std::string skip_name;
  int skip_depth = 0;

  void flush() {
    auto text = collapse_whitespace(buffer);
    buffer.clear();
    if (!text.empty()) blocks.push_back(Block{kind, level, std::move(text)});
    kind = Kind::Paragraph;
    level = 0;
  }

  void on_tag(const Tag& t) {
    if (!skip_name.empty()) {
      if (skip_name == "head" && !t.closing && !head_content(t.name)) {
        skip_name.clear();
        skip_depth = 0;
      } else {
        if (t.name == skip_name && !t.self_closing) skip_depth += t.closing ? -1 : 1;
        if (skip_depth <= 0) skip_name.clear();
        return;
      }
    }
    if (!t.closing && is_skipped(t.name) && !t.self_closing && !is_void(t.name)) {
      skip_name = t.name;
      skip_depth = 1;
      return;
    }
    if (const int h = heading_level(t.name)) {
      flush();
      if (!t.closing) {
        kind = Kind::Heading;
        level = h;
      }
      return;
    }
    if (t.name == "li") {
      flush();
      if (!t.closing) kind = Kind::ListItem;
      return;
    }
    if (is_block(t.name)) {
      flush();
      return;
    }
    if (t.name == "td" || t.name == "th" || t.name == "img" || t.name == "input") buffer.push_back(' ');
  }

  void on_text(std::string_view text, bool raw) {
    if (!skip_name.empty() || raw) return;
    buffer += decode_entities(text);
  }

  std::string render() {
    flush();
    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      if (i > 0) {
        const bool tight = b.kind == Kind::ListItem && blocks[i - 1].kind == Kind::ListItem;
        out += tight ? "\n" : "\n\n";
      }
      switch (b.kind) {
        case Kind::Heading:
          out += std::string(static_cast<std::size_t>(b.level), '#') + " " + b.text;
          break;
        case Kind::ListItem:
          out += "- " + b.text;
          break;
        case Kind::Paragraph:
          out += b.text;
          break;
      }
    }
    return out;
  }
};

std::size_t utf8_seq_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '&') {
      if (const auto n = decode_one(text, i, out)) {
        i += n;
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++n) {
    i += std::min(utf8_seq_len(static_cast<unsigned char>(text[i])), text.size() - i);
  }
  return n;
}

std::string truncate_at_word(std::string_view text, std::size_t cap) {
  // Byte offset just past the first `cap` code points.
  std::size_t cut = 0;
  std::size_t count = 0;
  while (cut < text.size() && count < cap) {
    cut += std::min(utf8_seq_len(static_cast<unsigned char>(text[cut])), text.size() - cut);
    ++count;
  }
  if (cut >= text.size()) return std::string(text);

  std::string_view kept = text.substr(0, cut);
  if (!is_space(text[cut])) {
    std::size_t back = kept.size();
    while (back > 0 && !is_space(kept[back - 1])) --back;
    if (back > 0) kept = kept.substr(0, back);
  }
  while (!kept.empty() && is_space(kept.back())) kept.remove_suffix(1);
  return std::string(kept);
}

PageMetadata extract_metadata(std::string_view html) {
  MetadataVisitor v;
  tokenize(html, v);
  PageMetadata m;
  m.title = first_non_empty({&v.title, &v.og_title});
  m.description = first_non_empty({&v.description, &v.og_description, &v.twitter_description});
  m.keywords = first_non_empty({&v.keywords});
  return m;
}

std::string html_to_summary(std::string_view html, std::size_t cap) {
  SummaryVisitor v;
  tokenize(html, v);
  return truncate_at_word(v.render(), cap);
}

}  // namespace sinkhole::discovery
