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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mathgcl/trec_io.hpp"

namespace mathgcl {

struct QueryMetrics {
  std::string query_id;
  std::optional<double> bpref;  // empty when the query has no relevant judgments
  std::optional<double> ndcg;   // empty when the query has no positive judgments
};

struct TrialReport {
  std::vector<QueryMetrics> per_query;
  double mean_bpref = 0.0;
  double mean_ndcg = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single trial
};

struct MetricReport {
  std::size_t k = kEvalDepth;
  std::vector<TrialReport> trials;
  MetricSummary bpref;
  MetricSummary ndcg;
};

/// Mean and sample (n - 1) standard deviation.
MetricSummary summarize(std::span<const double> values);

/// Throws kEmptyIntersection when no run query is judged.
TrialReport evaluate_trial(const RunFile& run, const QrelSet& qrels, std::size_t k = kEvalDepth);

MetricReport evaluate_run(std::span<const RunFile> trials, const QrelSet& qrels,
                          std::size_t k = kEvalDepth);

struct CombinedReport {
  MetricReport slt;
  MetricReport opt;
  double f1_bpref = 0.0;
  double f1_ndcg = 0.0;
};

CombinedReport combine_layouts(MetricReport slt, MetricReport opt);

std::string report_json(const MetricReport& report);
std::string report_json(const CombinedReport& report);

}  // namespace mathgcl
