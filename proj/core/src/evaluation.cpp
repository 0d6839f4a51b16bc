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

#include "mathgcl/evaluation.hpp"

#include <cmath>

#include <json.hpp>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

nlohmann::ordered_json to_json(const MetricSummary& s) {
  return nlohmann::ordered_json{{"mean", s.mean}, {"std", s.std}};
}

nlohmann::ordered_json to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["bpref"] = to_json(r.bpref);
  j["ndcg"] = to_json(r.ndcg);
  auto trials = nlohmann::ordered_json::array();
  for (const TrialReport& t : r.trials) {
    nlohmann::ordered_json tj;
    tj["mean_bpref"] = t.mean_bpref;
    tj["mean_ndcg"] = t.mean_ndcg;
    auto queries = nlohmann::ordered_json::array();
    for (const QueryMetrics& q : t.per_query) {
      nlohmann::ordered_json qj;
      qj["query"] = q.query_id;
      qj["bpref"] = q.bpref ? nlohmann::ordered_json(*q.bpref) : nlohmann::ordered_json();
      qj["ndcg"] = q.ndcg ? nlohmann::ordered_json(*q.ndcg) : nlohmann::ordered_json();
      queries.push_back(std::move(qj));
    }
    tj["queries"] = std::move(queries);
    trials.push_back(std::move(tj));
  }
  j["trials"] = std::move(trials);
  return j;
}

}  // namespace

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

TrialReport evaluate_trial(const RunFile& run, const QrelSet& qrels, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  TrialReport t;
  std::vector<double> bprefs, ndcgs;
  for (const auto& [qid, items] : run) {
    const Judgments* judged = qrels.find(qid);
    if (!judged) continue;
    std::vector<std::string> ranked;
    for (std::size_t i = 0; i < items.size() && i < k; ++i) ranked.push_back(items[i].id);
    QueryMetrics m{qid, std::nullopt, std::nullopt};
    try {
      m.bpref = bpref(ranked, *judged);
      bprefs.push_back(*m.bpref);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoRelevantJudged) throw;
    }
    try {
      m.ndcg = ndcg(ranked, *judged, k);
      ndcgs.push_back(*m.ndcg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoPositiveJudgments) throw;
    }
    t.per_query.push_back(std::move(m));
  }
  if (t.per_query.empty()) {
    throw Error(ErrorCode::kEmptyIntersection, "no query in the run has judgments");
  }
  t.mean_bpref = mean_of(bprefs);
  t.mean_ndcg = mean_of(ndcgs);
  return t;
}

MetricReport evaluate_run(std::span<const RunFile> trials, const QrelSet& qrels, std::size_t k) {
  if (trials.empty()) throw Error(ErrorCode::kInvalidArgument, "no run files given");
  MetricReport r;
  r.k = k;
  std::vector<double> b, n;
  for (const RunFile& run : trials) {
    r.trials.push_back(evaluate_trial(run, qrels, k));
    b.push_back(r.trials.back().mean_bpref);
    n.push_back(r.trials.back().mean_ndcg);
  }
  r.bpref = summarize(b);
  r.ndcg = summarize(n);
  return r;
}

CombinedReport combine_layouts(MetricReport slt, MetricReport opt) {
  CombinedReport c;
  c.f1_bpref = f1_combine(slt.bpref.mean, opt.bpref.mean);
  c.f1_ndcg = f1_combine(slt.ndcg.mean, opt.ndcg.mean);
  c.slt = std::move(slt);
  c.opt = std::move(opt);
  return c;
}

std::string report_json(const MetricReport& report) { return to_json(report).dump(2); }

std::string report_json(const CombinedReport& report) {
  nlohmann::ordered_json j;
  j["slt"] = to_json(report.slt);
  j["opt"] = to_json(report.opt);
  j["f1"] = {{"bpref", report.f1_bpref}, {"ndcg", report.f1_ndcg}};
  return j.dump(2);
}

}  // namespace mathgcl
