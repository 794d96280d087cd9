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

#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oracle {

std::filesystem::path fixture(const std::string& relative) {
  return std::filesystem::path(SINKHOLE_FIXTURES_DIR) / relative;
}

std::filesystem::path schema_dir() { return SINKHOLE_SCHEMA_DIR; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static double ratio(double a, double b) { return b == 0 ? 0.0 : a / b; }

Scores naive_scores(const std::vector<int>& predicted, const std::vector<bool>& actual) {
  if (predicted.size() != actual.size()) throw std::invalid_argument("size");
  Scores s;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    bool said_yes = predicted[i] == 1;
    bool said_no = predicted[i] == 0;
    if (actual[i]) {
      if (said_yes) s.tp++;
      else s.fn++;
    } else {
      if (said_no) s.tn++;
      else s.fp++;
    }
  }
  double tp = s.tp, fp = s.fp, fn = s.fn, tn = s.tn;
  s.accuracy = ratio(tp + tn, tp + fp + fn + tn);
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  s.f1 = ratio(2 * s.precision * s.recall, s.precision + s.recall);
  double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  s.mcc = den == 0 ? 0.0 : (tp * tn - fp * fn) / std::sqrt(den);
  return s;
}

static bool round3(double value, double expected) {
  return std::lround(value * 1000) == std::lround(expected * 1000);
}

std::vector<Matrix> matrices_matching(long positives, long negatives, double accuracy, double precision,
                                      double recall, double f1) {
  std::vector<Matrix> out;
  for (long tp = 0; tp <= positives; ++tp) {
    for (long fp = 0; fp <= negatives; ++fp) {
      long fn = positives - tp;
      long tn = negatives - fp;
      double a = double(tp + tn) / double(positives + negatives);
      double p = ratio(tp, tp + fp);
      double r = ratio(tp, tp + fn);
      double f = ratio(2 * p * r, p + r);
      if (round3(a, accuracy) && round3(p, precision) && round3(r, recall) && round3(f, f1))
        out.push_back({tp, fp, fn, tn});
    }
  }
  return out;
}

static bool covers(const std::string& parent, const std::string& name) {
  if (name == parent) return true;
  std::string tail = "." + parent;
  return name.size() > tail.size() && name.compare(name.size() - tail.size(), tail.size(), tail) == 0;
}

std::optional<std::uint64_t> suffix_match(const std::vector<Entry>& entries,
                                          const std::vector<std::string>& whitelist, const std::string& qname) {
  for (const auto& w : whitelist)
    if (covers(w, qname)) return std::nullopt;
  const Entry* best = nullptr;
  for (const auto& e : entries) {
    if (!e.blocking || !covers(e.domain, qname)) continue;
    if (!best || e.domain.size() > best->domain.size() ||
        (e.domain.size() == best->domain.size() && e.id < best->id))
      best = &e;
  }
  if (!best) return std::nullopt;
  return best->id;
}

}  // namespace oracle
