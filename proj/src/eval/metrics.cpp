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

#include "sinkhole/eval/metrics.hpp"

#include <cmath>

namespace sinkhole::eval {

using classifier::VerdictKind;

EvalMetrics metrics_from_matrix(const ConfusionMatrix& m) {
  EvalMetrics out;
  out.matrix = m;
  const double tp = static_cast<double>(m.tp);
  const double fp = static_cast<double>(m.fp);
  const double fn = static_cast<double>(m.fn);
  const double tn = static_cast<double>(m.tn);
  const double total = tp + fp + fn + tn;
  if (total > 0) out.accuracy = (tp + tn) / total;
  if (tp + fp > 0) out.precision = tp / (tp + fp);
  if (tp + fn > 0) out.recall = tp / (tp + fn);
  if (2 * tp + fp + fn > 0) out.f1 = 2 * tp / (2 * tp + fp + fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom > 0) out.mcc = (tp * tn - fp * fn) / std::sqrt(denom);
  return out;
}

EvalMetrics compute_metrics(std::span<const VerdictKind> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size()) throw LengthMismatch(predictions.size(), labels.size());
  ConfusionMatrix m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool positive = labels[i] == Label::Positive;
    switch (predictions[i]) {
      case VerdictKind::Yes:
        (positive ? m.tp : m.fp)++;
        break;
      case VerdictKind::No:
        (positive ? m.fn : m.tn)++;
        break;
      case VerdictKind::Unknown:
        (positive ? m.fn : m.fp)++;
        break;
    }
  }
  return metrics_from_matrix(m);
}

std::size_t hamming_distance(std::span<const VerdictKind> a, std::span<const VerdictKind> b) {
  if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

std::vector<std::vector<std::size_t>> hamming_matrix(std::span<const std::vector<VerdictKind>> decisions) {
  const auto n = decisions.size();
  std::vector<std::vector<std::size_t>> out(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out[i][j] = out[j][i] = hamming_distance(decisions[i], decisions[j]);
  }
  return out;
}

std::map<std::string, EvalMetrics> per_language_metrics(std::span<const VerdictKind> predictions,
                                                        std::span<const Label> labels,
                                                        std::span<const std::string> languages) {
  if (predictions.size() != labels.size()) throw LengthMismatch(predictions.size(), labels.size());
  if (languages.size() != labels.size()) throw LengthMismatch(languages.size(), labels.size());
  std::map<std::string, std::pair<std::vector<VerdictKind>, std::vector<Label>>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& g = groups[languages[i]];
    g.first.push_back(predictions[i]);
    g.second.push_back(labels[i]);
  }
  std::map<std::string, EvalMetrics> out;
  for (const auto& [lang, g] : groups) out[lang] = compute_metrics(g.first, g.second);
  return out;
}

nlohmann::json to_json(const EvalMetrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"mcc", m.mcc},
          {"matrix", {{"tp", m.matrix.tp}, {"fp", m.matrix.fp}, {"fn", m.matrix.fn}, {"tn", m.matrix.tn}}}};
}

}  // namespace sinkhole::eval
