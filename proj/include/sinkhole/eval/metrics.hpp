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
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinkhole/classifier/verdict.hpp"
#include "sinkhole/eval/dataset.hpp"

namespace sinkhole::eval {

class LengthMismatch : public std::invalid_argument {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : std::invalid_argument("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct EvalMetrics {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // Zero when any factor under the square root is zero.
  double mcc = 0;
  ConfusionMatrix matrix;
};

EvalMetrics metrics_from_matrix(const ConfusionMatrix& m);

/// Unknown predictions count against their true label: fn for positives,
/// fp for negatives.
EvalMetrics compute_metrics(std::span<const classifier::VerdictKind> predictions, std::span<const Label> labels);

std::size_t hamming_distance(std::span<const classifier::VerdictKind> a, std::span<const classifier::VerdictKind> b);

/// Pairwise distances between decision vectors.
std::vector<std::vector<std::size_t>> hamming_matrix(std::span<const std::vector<classifier::VerdictKind>> decisions);

/// Metrics restricted to each language present in `languages`.
std::map<std::string, EvalMetrics> per_language_metrics(std::span<const classifier::VerdictKind> predictions,
                                                        std::span<const Label> labels,
                                                        std::span<const std::string> languages);

nlohmann::json to_json(const EvalMetrics& m);

}  // namespace sinkhole::eval
