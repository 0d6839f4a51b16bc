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

#include "mathgcl/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "mathgcl/error.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {

GradCheckReport grad_check(const GradEvaluator& evaluate, std::span<const double> theta,
                           const GradCheckOptions& options) {
  if (theta.empty()) throw Error(ErrorCode::kInvalidArgument, "no parameters to check");
  const GradEvaluation base = evaluate(theta);
  if (base.gradient.size() != theta.size()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient length differs from parameter count");
  }
  const std::size_t want = std::min(options.coordinates, theta.size());
  const std::size_t budget = options.max_attempts ? options.max_attempts : 20 * want;

  Rng rng(derive_seed(options.seed, 0x4743));
  std::vector<double> probe(theta.begin(), theta.end());
  std::vector<bool> used(theta.size(), false);
  GradCheckReport report;
  for (std::size_t attempt = 0; attempt < budget && report.checked < want; ++attempt) {
    const std::size_t k = rng.uniform_index(theta.size());
    if (used[k]) continue;
    used[k] = true;

    probe[k] = theta[k] + options.epsilon;
    const GradEvaluation plus = evaluate(probe);
    probe[k] = theta[k] - options.epsilon;
    const GradEvaluation minus = evaluate(probe);
    probe[k] = theta[k];
    if (plus.pattern != base.pattern || minus.pattern != base.pattern) {
      ++report.kinks_skipped;
      continue;
    }
    const double numeric = (plus.value - minus.value) / (2.0 * options.epsilon);
    const double analytic = base.gradient[k];
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    const double err = std::abs(analytic - numeric) / denom;
    if (err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_coordinate = k;
    }
    ++report.checked;
  }
  return report;
}

}  // namespace mathgcl
