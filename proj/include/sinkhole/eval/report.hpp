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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinkhole/classifier/verdict.hpp"
#include "sinkhole/eval/dataset.hpp"
#include "sinkhole/eval/latency.hpp"
#include "sinkhole/eval/metrics.hpp"

namespace sinkhole::eval {

struct ModelEvaluation {
  std::string model;
  // Aligned with the dataset rows.
  std::vector<classifier::VerdictKind> predictions;
  // Sites the log had no verdict for; scored as Unknown.
  std::size_t missing = 0;
  EvalMetrics metrics;
  std::map<std::string, EvalMetrics> per_language;
};

struct EvaluationReport {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<ModelEvaluation> models;
  std::vector<std::vector<std::size_t>> hamming;
  std::optional<LatencySummary> latency;

  nlohmann::json to_json() const;
  std::string to_table() const;
  /// model,tp,fp,fn,tn,accuracy,precision,recall,f1,mcc
  std::string confusion_csv() const;
  /// Square matrix with a header row of model names.
  std::string hamming_csv() const;
  /// report.json, table.txt, confusion.csv, hamming.csv, latency.csv
  void write(const std::filesystem::path& dir) const;
};

/// Scores every model found in `verdicts` against `dataset`. Models keep the
/// order of their first appearance. When a model has several verdicts for
/// one site the most recent counts.
EvaluationReport evaluate(const Dataset& dataset, std::span<const classifier::Verdict> verdicts);

}  // namespace sinkhole::eval
