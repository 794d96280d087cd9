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

#include "sinkhole/eval/latency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace sinkhole::eval {

double percentile_inclusive(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty sample");
  if (p < 0 || p > 1) throw std::invalid_argument("percentile outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double rank = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

LatencySummary latency_summary(std::span<const LatencySamples> samples) {
  LatencySummary out;
  for (const auto& s : samples) {
    if (s.millis.empty()) throw EmptySamples(s.model);
    LatencyStats st;
    st.model = s.model;
    st.count = s.millis.size();
    st.mean = std::accumulate(s.millis.begin(), s.millis.end(), 0.0) / static_cast<double>(st.count);
    st.median = percentile_inclusive(s.millis, 0.5);
    st.p95 = percentile_inclusive(s.millis, 0.95);
    const auto [mn, mx] = std::minmax_element(s.millis.begin(), s.millis.end());
    st.min = *mn;
    st.max = *mx;
    out.stats.push_back(std::move(st));
  }
  const auto n = out.stats.size();
  out.mean_ratio.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.mean_ratio[i][j] = out.stats[j].mean > 0 ? out.stats[i].mean / out.stats[j].mean : 0.0;
    }
  }
  return out;
}

std::string LatencySummary::to_csv() const {
  std::ostringstream os;
  os << "model,count,mean_ms,median_ms,p95_ms,min_ms,max_ms\n";
  for (const auto& s : stats) {
    os << s.model << ',' << s.count << ',' << s.mean << ',' << s.median << ',' << s.p95 << ',' << s.min << ','
       << s.max << '\n';
  }
  return os.str();
}

std::string LatencySummary::to_table() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-24s %6s %10s %10s %10s\n", "model", "n", "mean ms", "median ms", "p95 ms");
  out += buf;
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof buf, "%-24s %6zu %10.1f %10.1f %10.1f\n", s.model.c_str(), s.count, s.mean, s.median,
                  s.p95);
    out += buf;
  }
  if (stats.size() > 1) {
    out += "mean latency ratio (row / column)\n";
    std::snprintf(buf, sizeof buf, "%-24s", "");
    out += buf;
    for (const auto& s : stats) {
      std::snprintf(buf, sizeof buf, " %10.10s", s.model.c_str());
      out += buf;
    }
    out += '\n';
    for (std::size_t i = 0; i < stats.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%-24s", stats[i].model.c_str());
      out += buf;
      for (double r : mean_ratio[i]) {
        std::snprintf(buf, sizeof buf, " %10.2f", r);
        out += buf;
      }
      out += '\n';
    }
  }
  return out;
}

nlohmann::json LatencySummary::to_json() const {
  auto models = nlohmann::json::array();
  for (const auto& s : stats) {
    models.push_back({{"model", s.model},
                      {"count", s.count},
                      {"mean_ms", s.mean},
                      {"median_ms", s.median},
                      {"p95_ms", s.p95},
                      {"min_ms", s.min},
                      {"max_ms", s.max}});
  }
  return {{"models", models}, {"mean_ratio", mean_ratio}};
}

}  // namespace sinkhole::eval
