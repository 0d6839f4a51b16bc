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

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>

namespace mathgcl {

inline constexpr int kRelevanceThreshold = 3;
inline constexpr int kMaxGrade = 4;

/// Judged formula id -> grade (0..4) for a single query.
using Judgments = std::unordered_map<std::string, int>;

/// Binary preference. Unjudged ids are ignored; grades >= threshold count
/// as relevant. The irrelevant-above counter is clipped at min(R, N); with
/// N = 0 each retrieved relevant document contributes 1.
/// Throws kNoRelevantJudged when R = 0.
double bpref(std::span<const std::string> ranked, const Judgments& judged,
             int threshold = kRelevanceThreshold);

/// sum_{i=1}^{min(k, n)} r_i / log2(i + 1)
double dcg(std::span<const int> grades, std::size_t k);

/// DCG of the judged-only list over the ideal DCG from all judgments.
/// Throws kNoPositiveJudgments when every judged grade is 0.
double ndcg(std::span<const std::string> ranked, const Judgments& judged, std::size_t k = 1000);

/// Harmonic mean 2ab / (a + b). Throws kZeroInput unless both lie in (0, 1].
double f1_combine(double a, double b);

}  // namespace mathgcl
