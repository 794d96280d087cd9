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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace sinkhole::eval {

class EmptySamples : public std::invalid_argument {
 public:
  explicit EmptySamples(const std::string& model) : std::invalid_argument("no latency samples for " + model) {}
};

struct LatencySamples {
  std::string model;
  std::vector<double> millis;
};

struct LatencyStats {
  std::string model;
  std::size_t count = 0;
  double mean = 0;
  double median = 0;
  double p95 = 0;
  double min = 0;
  double max = 0;
};

struct LatencySummary {
  std::vector<LatencyStats> stats;
  // ratio[i][j] = mean(i) / mean(j)
  std::vector<std::vector<double>> mean_ratio;

  std::string to_csv() const;
  std::string to_table() const;
  nlohmann::json to_json() const;
};

/// Inclusive percentile with linear interpolation between closest ranks
/// (rank = p * (n - 1)), the same rule spreadsheets use for PERCENTILE.INC.
double percentile_inclusive(std::vector<double> values, double p);

LatencySummary latency_summary(std::span<const LatencySamples> samples);

}  // namespace sinkhole::eval
