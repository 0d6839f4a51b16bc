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
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mathgcl {

struct GradEvaluation {
  double value = 0.0;
  std::vector<double> gradient;
  /// Identifies the active piece of a piecewise-smooth loss (e.g. the
  /// ReLU mask). Probes whose pattern differs from the base point straddle
  /// a kink and are resampled.
  std::uint64_t pattern = 0;
};

using GradEvaluator = std::function<GradEvaluation(std::span<const double>)>;

struct GradCheckOptions {
  double epsilon = 1e-5;
  std::size_t coordinates = 256;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 0;  // 0 means 20 x coordinates
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t kinks_skipped = 0;
  std::size_t worst_coordinate = 0;
};

/// Central finite differences on a random subset of coordinates.
/// Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport grad_check(const GradEvaluator& evaluate, std::span<const double> theta,
                           const GradCheckOptions& options = {});

}  // namespace mathgcl
