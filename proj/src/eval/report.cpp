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

#include "sinkhole/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "sinkhole/common/domain.hpp"

namespace sinkhole::eval {

using classifier::Verdict;
using classifier::VerdictKind;

EvaluationReport evaluate(const Dataset& dataset, std::span<const Verdict> verdicts) {
  EvaluationReport report;
  report.positives = dataset.count(Label::Positive);
  report.negatives = dataset.count(Label::Negative);

  std::vector<std::string> order;
  std::unordered_map<std::string, std::unordered_map<std::string, const Verdict*>> latest;
  for (const auto& v : verdicts) {
    auto [it, inserted] = latest.try_emplace(v.model_id);
    if (inserted) order.push_back(v.model_id);
    auto& slot = it->second[site_key(v.dossier_url)];
    if (!slot || slot->created_at <= v.created_at) slot = &v;
  }

  std::vector<Label> labels;
  std::vector<std::string> languages;
  for (const auto& s : dataset.sites) {
    labels.push_back(s.label);
    languages.push_back(s.language);
  }

  std::vector<LatencySamples> samples;
  std::vector<std::vector<VerdictKind>> decisions;
  for (const auto& model : order) {
    ModelEvaluation m;
    m.model = model;
    const auto& by_site = latest[model];
    LatencySamples ls{model, {}};
    for (const auto& s : dataset.sites) {
      const auto it = by_site.find(site_key(s.url));
      if (it == by_site.end()) {
        m.predictions.push_back(VerdictKind::Unknown);
        ++m.missing;
      } else {
        m.predictions.push_back(it->second->verdict);
        ls.millis.push_back(static_cast<double>(it->second->latency.count()));
      }
    }
    m.metrics = compute_metrics(m.predictions, labels);
    m.per_language = per_language_metrics(m.predictions, labels, languages);
    decisions.push_back(m.predictions);
    if (!ls.millis.empty()) samples.push_back(std::move(ls));
    report.models.push_back(std::move(m));
  }
  report.hamming = hamming_matrix(decisions);
  if (!samples.empty() && samples.size() == report.models.size()) report.latency = latency_summary(samples);
  return report;
}

nlohmann::json EvaluationReport::to_json() const {
  auto models_json = nlohmann::json::array();
  for (const auto& m : models) {
    nlohmann::json langs = nlohmann::json::object();
    for (const auto& [lang, lm] : m.per_language) langs[lang] = eval::to_json(lm);
    models_json.push_back({{"model", m.model},
                           {"missing", m.missing},
                           {"metrics", eval::to_json(m.metrics)},
                           {"per_language", langs}});
  }
  nlohmann::json j{{"dataset", {{"positives", positives}, {"negatives", negatives}}},
                   {"models", models_json},
                   {"hamming", hamming}};
  j["latency"] = latency ? latency->to_json() : nlohmann::json(nullptr);
  return j;
}

std::string EvaluationReport::to_table() const {
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "dataset: %zu positive, %zu negative\n\n", positives, negatives);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-24s %9s %9s %9s %9s %9s %5s %5s %5s %5s\n", "model", "accuracy", "precision",
                "recall", "f1", "mcc", "tp", "fp", "fn", "tn");
  out += buf;
  for (const auto& m : models) {
    const auto& x = m.metrics;
    std::snprintf(buf, sizeof buf, "%-24s %9.3f %9.3f %9.3f %9.3f %9.3f %5zu %5zu %5zu %5zu\n", m.model.c_str(),
                  x.accuracy, x.precision, x.recall, x.f1, x.mcc, x.matrix.tp, x.matrix.fp, x.matrix.fn, x.matrix.tn);
    out += buf;
  }
  if (models.size() > 1) {
    out += "\nhamming distance between decision vectors\n";
    std::snprintf(buf, sizeof buf, "%-24s", "");
    out += buf;
    for (const auto& m : models) {
      std::snprintf(buf, sizeof buf, " %10.10s", m.model.c_str());
      out += buf;
    }
    out += '\n';
    for (std::size_t i = 0; i < models.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%-24s", models[i].model.c_str());
      out += buf;
      for (auto d : hamming[i]) {
        std::snprintf(buf, sizeof buf, " %10zu", d);
        out += buf;
      }
      out += '\n';
    }
  }
  bool any_lang = false;
  for (const auto& m : models) any_lang = any_lang || m.per_language.size() > 1;
  if (any_lang) {
    out += "\nper-language f1\n";
    for (const auto& m : models) {
      out += m.model + ":";
      for (const auto& [lang, lm] : m.per_language) {
        std::snprintf(buf, sizeof buf, " %s=%.3f", lang.c_str(), lm.f1);
        out += buf;
      }
      out += '\n';
    }
  }
  if (latency) out += "\n" + latency->to_table();
  return out;
}

std::string EvaluationReport::confusion_csv() const {
  std::ostringstream os;
  os << "model,tp,fp,fn,tn,accuracy,precision,recall,f1,mcc\n";
  for (const auto& m : models) {
    const auto& x = m.metrics;
    os << m.model << ',' << x.matrix.tp << ',' << x.matrix.fp << ',' << x.matrix.fn << ',' << x.matrix.tn << ','
       << x.accuracy << ',' << x.precision << ',' << x.recall << ',' << x.f1 << ',' << x.mcc << '\n';
  }
  return os.str();
}

std::string EvaluationReport::hamming_csv() const {
  std::ostringstream os;
  os << "model";
  for (const auto& m : models) os << ',' << m.model;
  os << '\n';
  for (std::size_t i = 0; i < models.size(); ++i) {
    os << models[i].model;
    for (auto d : hamming[i]) os << ',' << d;
    os << '\n';
  }
  return os.str();
}

void EvaluationReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << body;
  };
  put("report.json", to_json().dump(2) + "\n");
  put("table.txt", to_table());
  put("confusion.csv", confusion_csv());
  put("hamming.csv", hamming_csv());
  if (latency) put("latency.csv", latency->to_csv());
}

}  // namespace sinkhole::eval
