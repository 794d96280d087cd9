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

// Reference implementations the library is checked against. They share no
// code with src/ and favour obviousness over speed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

std::filesystem::path fixture(const std::string& relative);
std::filesystem::path schema_dir();
std::string read_text(const std::filesystem::path& path);

struct Scores {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double mcc = 0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

// predicted: 1 yes, 0 no, -1 unknown. actual: true for positive.
Scores naive_scores(const std::vector<int>& predicted, const std::vector<bool>& actual);

struct Matrix {
  long tp, fp, fn, tn;
};

// Every confusion matrix over `positives`/`negatives` whose four headline
// figures round (3 places) to the given values.
std::vector<Matrix> matrices_matching(long positives, long negatives, double accuracy, double precision,
                                      double recall, double f1);

struct Entry {
  std::uint64_t id;
  std::string domain;
  bool blocking;  // active and inside its window at the probe time
};

// Linear scan with plain string suffix tests: the longest covering blocking
// entry wins, ties to the lowest id; any covering whitelist name vetoes.
std::optional<std::uint64_t> suffix_match(const std::vector<Entry>& entries,
                                          const std::vector<std::string>& whitelist, const std::string& qname);

}  // namespace oracle
