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

#include "sinkhole/discovery/public_suffix.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::discovery {

namespace {

// Multi-label ICANN suffixes for the regions most web traffic comes from, a
// handful of hosting suffixes where every subdomain belongs to a different
// owner, and one wildcard/exception pair. Single-label TLDs are covered by the
// implicit "*" rule and need not be listed.
constexpr std::string_view kEmbeddedRules = R"(
co.uk
org.uk
ac.uk
gov.uk
ltd.uk
plc.uk
me.uk
net.uk
sch.uk
nhs.uk
police.uk
com.au
net.au
org.au
edu.au
gov.au
asn.au
id.au
co.nz
ac.nz
govt.nz
org.nz
net.nz
co.jp
ne.jp
or.jp
ac.jp
go.jp
ed.jp
com.cn
net.cn
org.cn
edu.cn
gov.cn
ac.cn
com.hk
edu.hk
gov.hk
org.hk
net.hk
com.tw
edu.tw
gov.tw
org.tw
net.tw
com.sg
edu.sg
gov.sg
org.sg
co.kr
ac.kr
go.kr
or.kr
ne.kr
co.in
net.in
org.in
ac.in
gov.in
edu.in
res.in
co.id
ac.id
go.id
or.id
com.my
edu.my
gov.my
com.ph
edu.ph
gov.ph
com.vn
edu.vn
gov.vn
co.th
ac.th
go.th
com.br
net.br
org.br
gov.br
edu.br
com.mx
org.mx
gob.mx
edu.mx
net.mx
com.ar
gob.ar
edu.ar
org.ar
com.co
edu.co
gov.co
com.pe
edu.pe
gob.pe
cl
gob.cl
com.es
org.es
edu.es
gob.es
nom.es
gouv.fr
asso.fr
com.fr
com.pt
gov.pt
edu.pt
org.pt
co.il
ac.il
gov.il
org.il
com.tr
edu.tr
gov.tr
org.tr
com.sa
edu.sa
gov.sa
org.sa
com.eg
edu.eg
gov.eg
org.eg
co.ae
ac.ae
gov.ae
com.qa
edu.qa
com.ua
com.pl
co.za
ac.za
gov.za
org.za
com.ng
edu.ng
co.ke
ac.ke
github.io
gitlab.io
herokuapp.com
vercel.app
netlify.app
pages.dev
workers.dev
web.app
firebaseapp.com
appspot.com
blogspot.com
azurewebsites.net
cloudfront.net
hf.space
streamlit.app
replit.app
onrender.com
fly.dev
glitch.me
*.ck
!www.ck
*.bd
*.np
)";

}  // namespace

PublicSuffixList PublicSuffixList::parse(std::string_view text) {
  PublicSuffixList psl;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.starts_with("//")) continue;
    // Rules end at the first whitespace.
    line = line.substr(0, line.find_first_of(" \t"));
    std::string rule = lowercase_ascii(line);
    if (rule.starts_with("!")) {
      psl.exceptions_.insert(rule.substr(1));
    } else if (rule.starts_with("*.")) {
      psl.wildcards_.insert(rule.substr(2));
    } else {
      psl.rules_.insert(std::move(rule));
    }
  }
  return psl;
}

PublicSuffixList PublicSuffixList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const PublicSuffixList& PublicSuffixList::embedded() {
  static const PublicSuffixList psl = parse(kEmbeddedRules);
  return psl;
}

std::string PublicSuffixList::public_suffix(std::string_view name) const {
  const auto suffixes = label_suffixes(name);
  if (suffixes.empty()) return {};
  // Longest first: the first hit is the prevailing rule.
  for (std::size_t i = 0; i < suffixes.size(); ++i) {
    const std::string s(suffixes[i]);
    if (exceptions_.contains(s)) {
      // An exception rule's suffix is the rule minus its leftmost label.
      return i + 1 < suffixes.size() ? std::string(suffixes[i + 1]) : std::string{};
    }
    if (rules_.contains(s)) return s;
    if (i + 1 < suffixes.size() && wildcards_.contains(std::string(suffixes[i + 1]))) return s;
  }
  return std::string(suffixes.back());
}

std::optional<std::string> PublicSuffixList::registrable_domain(std::string_view name) const {
  const std::string suffix = public_suffix(name);
  if (suffix.empty() || name.size() <= suffix.size()) return std::nullopt;
  const auto head = name.substr(0, name.size() - suffix.size() - 1);
  const auto dot = head.rfind('.');
  const auto label = dot == std::string_view::npos ? head : head.substr(dot + 1);
  return std::string(label) + "." + suffix;
}

}  // namespace sinkhole::discovery
