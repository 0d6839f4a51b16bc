// Copyright 2026 The mathgcl Authors. All rights reserved.
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

#include "mathgcl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "mathgcl/error.hpp"

namespace mathgcl {

double bpref(std::span<const std::string> ranked, const Judgments& judged, int threshold) {
  std::size_t r_total = 0, n_total = 0;
  for (const auto& [id, grade] : judged) (grade >= threshold ? r_total : n_total) += 1;
  if (r_total == 0) throw Error(ErrorCode::kNoRelevantJudged, "query has no judged-relevant formulas");

  const std::size_t cap = std::min(r_total, n_total);
  std::unordered_set<std::string_view> seen;
  std::size_t irrelevant_above = 0;
  double sum = 0.0;
  for (const std::string& id : ranked) {
    auto it = judged.find(id);
    if (it == judged.end() || !seen.insert(id).second) continue;
    if (it->second < threshold) {
      ++irrelevant_above;
    } else if (cap == 0) {
      sum += 1.0;
    } else {
      sum += 1.0 - static_cast<double>(std::min(irrelevant_above, cap)) / static_cast<double>(cap);
    }
  }
  return sum / static_cast<double>(r_total);
}

double dcg(std::span<const int> grades, std::size_t k) {
  double s = 0.0;
  const std::size_t n = std::min(k, grades.size());
  for (std::size_t i = 0; i < n; ++i) s += grades[i] / std::log2(static_cast<double>(i) + 2.0);
  return s;
}

double ndcg(std::span<const std::string> ranked, const Judgments& judged, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  std::vector<int> ideal;
  ideal.reserve(judged.size());
  for (const auto& [id, grade] : judged) ideal.push_back(grade);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal, k);
  if (!(idcg > 0.0)) throw Error(ErrorCode::kNoPositiveJudgments, "query has no positive judgments");

  std::unordered_set<std::string_view> seen;
  std::vector<int> grades;
  for (const std::string& id : ranked) {
    auto it = judged.find(id);
    if (it == judged.end() || !seen.insert(id).second) continue;
    grades.push_back(it->second);
  }
  return dcg(grades, k) / idcg;
}

double f1_combine(double a, double b) {
  if (!(a > 0.0 && a <= 1.0) || !(b > 0.0 && b <= 1.0)) {
    throw Error(ErrorCode::kZeroInput, "F1 inputs must lie in (0, 1]");
  }
  return 2.0 * a * b / (a + b);
}

}  // namespace mathgcl
