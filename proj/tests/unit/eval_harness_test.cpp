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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "mathgcl/error.hpp"
#include "mathgcl/evaluation.hpp"
#include "mathgcl/metrics.hpp"
#include "mathgcl/trec_io.hpp"
#include "support/metric_oracle.hpp"
#include "support/test_support.hpp"

namespace mathgcl {
namespace {

using Ids = std::vector<std::string>;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

TEST(Bpref, HandFixtures) {
  const Judgments j{{"r1", 4}, {"r2", 3}, {"n", 0}};
  EXPECT_DOUBLE_EQ(bpref(Ids{"r1", "r2", "n"}, j), 1.0);
  EXPECT_DOUBLE_EQ(bpref(Ids{"n", "r1", "r2"}, j), 0.0);
  EXPECT_DOUBLE_EQ(bpref(Ids{"r1", "n", "r2"}, j), 0.5);
}

TEST(Bpref, GradeTwoIsNotRelevant) {
  const Judgments j{{"a", 2}, {"b", 3}};
  EXPECT_DOUBLE_EQ(bpref(Ids{"a", "b"}, j), 0.0);
}

TEST(Bpref, NoRelevantJudgments) {
  const Judgments j{{"a", 0}, {"b", 2}};
  EXPECT_EQ(code_of([&] { bpref(Ids{"a"}, j); }), ErrorCode::kNoRelevantJudged);
}

TEST(Dcg, HandFixtures) {
  EXPECT_DOUBLE_EQ(dcg(std::vector<int>{4}, 10), 4.0);
  EXPECT_NEAR(dcg(std::vector<int>{4, 3, 0}, 3), 5.892789, 1e-6);
  EXPECT_EQ(dcg(std::vector<int>{}, 5), 0.0);
  EXPECT_DOUBLE_EQ(dcg(std::vector<int>{4, 3, 0}, 1), 4.0);
}

TEST(Ndcg, HandFixtures) {
  const Judgments j{{"a", 0}, {"b", 4}};
  EXPECT_NEAR(ndcg(Ids{"a", "b"}, j, 2), 0.630930, 1e-6);
  EXPECT_DOUBLE_EQ(ndcg(Ids{"b", "a"}, j, 2), 1.0);
  EXPECT_EQ(code_of([] { ndcg(Ids{"a"}, Judgments{{"a", 0}}, 10); }), ErrorCode::kNoPositiveJudgments);
}

TEST(Ndcg, AllNinetyJudgedUsed) {
  Judgments j;
  Ids ranked;
  for (int i = 0; i < 90; ++i) {
    const std::string id = "f" + std::to_string(i);
    j[id] = 4 - (i * 5) / 90;
    ranked.push_back(id);
  }
  EXPECT_DOUBLE_EQ(ndcg(ranked, j, 1000), 1.0);
  std::reverse(ranked.begin(), ranked.end());
  std::vector<int> grades;
  for (const auto& id : ranked) grades.push_back(j[id]);
  std::vector<int> ideal = grades;
  std::sort(ideal.rbegin(), ideal.rend());
  EXPECT_NEAR(ndcg(ranked, j, 1000), dcg(grades, 1000) / dcg(ideal, 1000), 1e-12);
}

TEST(Metrics, UnjudgedDocumentsAreIgnored) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    testing::JudgedList list = testing::random_judged_list(rng);
    const double b = bpref(list.ranked, list.judged);
    const double n = ndcg(list.ranked, list.judged, 1000);
    Ids noisy = list.ranked;
    for (int extra = 0; extra < 5; ++extra) {
      noisy.insert(noisy.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(noisy.size() + 1)),
                   "unjudged" + std::to_string(extra));
    }
    EXPECT_DOUBLE_EQ(bpref(noisy, list.judged), b);
    EXPECT_DOUBLE_EQ(ndcg(noisy, list.judged, 1000), n);
  }
}

TEST(Metrics, MatchBruteForceOracle) {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const testing::JudgedList list = testing::random_judged_list(rng);
    EXPECT_NEAR(bpref(list.ranked, list.judged), testing::brute_bpref(list), 1e-9);
    for (std::size_t k : {1u, 3u, 1000u}) {
      EXPECT_NEAR(ndcg(list.ranked, list.judged, k), testing::brute_ndcg(list, k), 1e-9);
    }
  }
}

TEST(F1, PublishedPairsRoundToThreeDecimals) {
  EXPECT_EQ(round3(f1_combine(0.680, 0.660)), 0.670);
  EXPECT_EQ(round3(f1_combine(0.855, 0.864)), 0.859);
  EXPECT_DOUBLE_EQ(f1_combine(0.42, 0.42), 0.42);
  EXPECT_EQ(code_of([] { f1_combine(0.0, 0.5); }), ErrorCode::kZeroInput);
  EXPECT_EQ(code_of([] { f1_combine(0.5, 1.5); }), ErrorCode::kZeroInput);
}

QrelSet perfect_qrels() {
  QrelSet q;
  q.add("q1", "a", 4);
  q.add("q1", "b", 3);
  q.add("q1", "c", 0);
  return q;
}

RunFile make_run(const std::string& qid, const Ids& ids) {
  RunFile run;
  for (std::size_t i = 0; i < ids.size(); ++i) run[qid].push_back(ScoredId{ids[i], 1.0 - 0.1 * double(i)});
  return run;
}

TEST(Evaluate, PerfectSingleQuery) {
  const TrialReport t = evaluate_trial(make_run("q1", {"a", "b", "c"}), perfect_qrels());
  EXPECT_DOUBLE_EQ(t.mean_bpref, 1.0);
  EXPECT_DOUBLE_EQ(t.mean_ndcg, 1.0);
}

TEST(Evaluate, SampleStandardDeviation) {
  const std::vector<double> means{0.6, 0.8};
  const MetricSummary s = summarize(means);
  EXPECT_NEAR(s.mean, 0.7, 1e-12);
  EXPECT_NEAR(s.std, 0.1414, 5e-5);
  EXPECT_EQ(summarize(std::vector<double>{0.5}).std, 0.0);
}

TEST(Evaluate, TrialsAreSummarized) {
  const QrelSet q = perfect_qrels();
  const std::vector<RunFile> trials{make_run("q1", {"a", "b", "c"}), make_run("q1", {"c", "a", "b"})};
  const MetricReport r = evaluate_run(trials, q);
  ASSERT_EQ(r.trials.size(), 2u);
  EXPECT_DOUBLE_EQ(r.bpref.mean, 0.5);
  EXPECT_NEAR(r.bpref.std, std::sqrt(0.5), 1e-12);
}

TEST(Evaluate, OnlyUnjudgedQueries) {
  EXPECT_EQ(code_of([] { evaluate_trial(make_run("other", {"a"}), perfect_qrels()); }),
            ErrorCode::kEmptyIntersection);
}

TEST(Evaluate, CombinedLayoutsUseF1) {
  const QrelSet q = perfect_qrels();
  const std::vector<RunFile> slt{make_run("q1", {"a", "b", "c"})};
  const std::vector<RunFile> opt{make_run("q1", {"a", "c", "b"})};
  const CombinedReport c = combine_layouts(evaluate_run(slt, q), evaluate_run(opt, q));
  EXPECT_DOUBLE_EQ(c.f1_bpref, f1_combine(1.0, 0.5));
  EXPECT_NE(report_json(c).find("f1"), std::string::npos);
}

TEST(TrecIo, QrelsAndRunRoundTrip) {
  const auto dir = testing::scratch_dir("trec");
  write_qrels(dir / "q.txt", perfect_qrels());
  const QrelSet q = read_qrels(dir / "q.txt");
  EXPECT_EQ(q.size(), 3u);
  ASSERT_NE(q.find("q1"), nullptr);
  EXPECT_EQ(q.find("q1")->at("b"), 3);

  const std::vector<RankedList> lists{RankedList{"q1", {{"a", 0.9}, {"b", 0.5}}}};
  write_run(dir / "r.run", lists);
  const RunFile run = read_run(dir / "r.run");
  ASSERT_EQ(run.at("q1").size(), 2u);
  EXPECT_EQ(run.at("q1")[1].id, "b");
  EXPECT_NEAR(run.at("q1")[0].score, 0.9, 1e-9);
  std::filesystem::remove_all(dir);
}

TEST(TrecIo, FourColumnQrelsAndBadGrades) {
  const auto dir = testing::scratch_dir("trec4");
  { std::ofstream(dir / "q.txt") << "q1 0 a 4\nq1 0 b 0\n"; }
  EXPECT_EQ(read_qrels(dir / "q.txt").size(), 2u);
  { std::ofstream(dir / "bad.txt") << "q1 a 7\n"; }
  EXPECT_EQ(code_of([&] { read_qrels(dir / "bad.txt"); }), ErrorCode::kMalformedRecord);
  QrelSet q;
  q.add("q", "a", 1);
  EXPECT_EQ(code_of([&] { q.add("q", "a", 2); }), ErrorCode::kMalformedRecord);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mathgcl
