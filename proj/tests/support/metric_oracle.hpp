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

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mathgcl/metrics.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl::testing {

struct JudgedList {
  std::vector<std::string> ranked;
  Judgments judged;
};

/// Up to 12 ranked items with grades 0-4; some ranked items are unjudged
/// and some judged items are never retrieved. At least one item is relevant.
inline JudgedList random_judged_list(Rng& rng) {
  JudgedList out;
  const std::size_t pool = 2 + rng.uniform_index(14);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < pool; ++i) ids.push_back("d" + std::to_string(i));
  for (const auto& id : ids) {
    if (rng.uniform_index(5) != 0) out.judged[id] = static_cast<int>(rng.uniform_index(5));
  }
  out.judged[ids[rng.uniform_index(pool)]] = 3 + static_cast<int>(rng.uniform_index(2));
  rng.shuffle(ids);
  const std::size_t length = 1 + rng.uniform_index(std::min<std::size_t>(12, pool));
  out.ranked.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(length));
  return out;
}

/// Direct evaluation: for each retrieved relevant document count the judged
/// non-relevant documents strictly above it in the ranking.
inline double brute_bpref(const JudgedList& list, int threshold = kRelevanceThreshold) {
  double big_r = 0, big_n = 0;
  for (const auto& [id, g] : list.judged) (g >= threshold ? big_r : big_n) += 1;
  const double cap = std::min(big_r, big_n);
  double sum = 0;
  for (std::size_t p = 0; p < list.ranked.size(); ++p) {
    auto it = list.judged.find(list.ranked[p]);
    if (it == list.judged.end() || it->second < threshold) continue;
    double above = 0;
    for (std::size_t q = 0; q < p; ++q) {
      auto jt = list.judged.find(list.ranked[q]);
      if (jt != list.judged.end() && jt->second < threshold) above += 1;
    }
    sum += cap == 0 ? 1.0 : 1.0 - std::min(above, cap) / cap;
  }
  return sum / big_r;
}

inline double brute_ndcg(const JudgedList& list, std::size_t k) {
  auto discounted = [k](const std::vector<int>& grades) {
    double s = 0;
    for (std::size_t i = 1; i <= grades.size() && i <= k; ++i) {
      s += grades[i - 1] * std::log(2.0) / std::log(double(i) + 1.0);
    }
    return s;
  };
  std::vector<int> filtered;
  for (const auto& id : list.ranked) {
    auto it = list.judged.find(id);
    if (it != list.judged.end()) filtered.push_back(it->second);
  }
  std::vector<int> ideal;
  for (const auto& [id, g] : list.judged) ideal.push_back(g);
  std::sort(ideal.rbegin(), ideal.rend());
  return discounted(filtered) / discounted(ideal);
}

}  // namespace mathgcl::testing
