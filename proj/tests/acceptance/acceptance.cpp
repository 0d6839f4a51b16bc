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

// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mathgcl/encoder.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/evaluation.hpp"
#include "mathgcl/gcl_params.hpp"
#include "mathgcl/grad_check.hpp"
#include "mathgcl/graph_builders.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/log.hpp"
#include "mathgcl/metrics.hpp"
#include "mathgcl/pipeline.hpp"
#include "mathgcl/query_pipeline.hpp"
#include "mathgcl/retrieval_index.hpp"
#include "mathgcl/trainer.hpp"
#include "mathgcl/trec_io.hpp"
#include "support/metric_oracle.hpp"
#include "support/test_support.hpp"

namespace {

using namespace mathgcl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Tolerances and limits.
constexpr double kMetricTolerance = 1e-9;
constexpr double kGradTolerance = 1e-4;
constexpr std::size_t kGradCoordinates = 200;
constexpr double kEmaTolerance = 1e-12;
constexpr double kLossRatio = 0.8;
constexpr double kSelfScoreTolerance = 1e-6;
constexpr double kBaselineMargin = 0.02;
constexpr double kChanceFactor = 2.0;
constexpr std::size_t kChanceSeeds = 5;
constexpr double kMetricSeconds = 5.0;
constexpr double kParserSeconds = 2.0;
constexpr double kGradSeconds = 60.0;
constexpr double kBenchmarkSeconds = 600.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-22s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

std::vector<TrainingGraph> random_graphs(Rng& rng, std::size_t count, std::size_t nodes, std::size_t dim) {
  std::vector<TrainingGraph> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Layout layout = i % 2 ? Layout::kOpt : Layout::kSlt;
    out.push_back(TrainingGraph{testing::random_tree(rng, nodes, layout),
                                random_matrix(rng, Eigen::Index(nodes), Eigen::Index(dim))});
  }
  return out;
}

Outcome metric_oracle() {
  const auto start = Clock::now();
  Outcome o;
  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const testing::JudgedList list = testing::random_judged_list(rng);
    worst = std::max(worst, std::abs(bpref(list.ranked, list.judged) - testing::brute_bpref(list)));
    worst = std::max(worst, std::abs(ndcg(list.ranked, list.judged, 1000) - testing::brute_ndcg(list, 1000)));
  }
  o.require(worst <= kMetricTolerance, "oracle gap " + fmt("%.3g", worst));
  const Judgments j{{"r1", 4}, {"r2", 3}, {"n", 0}};
  using Ids = std::vector<std::string>;
  o.require(bpref(Ids{"r1", "r2", "n"}, j) == 1.0, "bpref fixture 1");
  o.require(bpref(Ids{"n", "r1", "r2"}, j) == 0.0, "bpref fixture 0");
  o.require(bpref(Ids{"r1", "n", "r2"}, j) == 0.5, "bpref fixture 0.5");
  o.require(std::abs(dcg(std::vector<int>{4, 3, 0}, 3) - 5.892789) < 1e-6, "dcg fixture");
  o.require(std::abs(ndcg(Ids{"a", "b"}, Judgments{{"a", 0}, {"b", 4}}, 2) - 0.630930) < 1e-6, "ndcg fixture");
  const double secs = seconds_since(start);
  o.require(secs < kMetricSeconds, "runtime " + fmt("%.2fs", secs));
  o.detail = (o.pass ? "200 lists, max gap " + fmt("%.2g", worst) : o.detail);
  return o;
}

Outcome f1_fixture() {
  Outcome o;
  const double a = f1_combine(0.680, 0.660);
  const double b = f1_combine(0.855, 0.864);
  o.require(std::round(a * 1000) == 670, "f1(0.680,0.660)=" + fmt("%.4f", a));
  o.require(std::round(b * 1000) == 859, "f1(0.855,0.864)=" + fmt("%.4f", b));
  if (o.pass) o.detail = fmt("%.3f", a) + " and " + fmt("%.3f", b);
  return o;
}

Outcome parser_golden() {
  const auto start = Clock::now();
  Outcome o;
  std::ifstream in(testing::test_data("parser_golden.jsonl"));
  o.require(bool(in), "golden file missing");
  std::string line;
  std::size_t count = 0, mismatched = 0;
  bool worked_example = false;
  auto as_json = [](const FormulaGraph& g) {
    nlohmann::json j = nlohmann::json::parse(serialize_graph(g, "q"));
    j.erase("id");
    return j;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json expected = nlohmann::json::parse(line);
    const std::string latex = expected.at("latex");
    if (as_json(graph_from_latex(latex, Layout::kSlt)) != expected.at("slt") ||
        as_json(graph_from_latex(latex, Layout::kOpt)) != expected.at("opt")) {
      ++mismatched;
    }
    worked_example = worked_example || latex == "a^3+b^2=0";
    ++count;
  }
  o.require(count >= 30, "only " + std::to_string(count) + " golden formulas");
  o.require(worked_example, "a^3+b^2=0 missing from golden file");
  o.require(mismatched == 0, std::to_string(mismatched) + " golden mismatches");
  std::size_t opt_differs = 0, slt_same = 0;
  for (const auto& p : testing::commutative_pairs(100, 11)) {
    if (serialize_graph(graph_from_latex(p.original, Layout::kOpt), "q") !=
        serialize_graph(graph_from_latex(p.reordered, Layout::kOpt), "q")) {
      ++opt_differs;
    }
    if (serialize_graph(graph_from_latex(p.original, Layout::kSlt), "q") ==
        serialize_graph(graph_from_latex(p.reordered, Layout::kSlt), "q")) {
      ++slt_same;
    }
  }
  o.require(opt_differs == 0, std::to_string(opt_differs) + " OPT pairs differ");
  o.require(slt_same == 0, std::to_string(slt_same) + " SLT pairs coincide");
  const double secs = seconds_since(start);
  o.require(secs < kParserSeconds, "runtime " + fmt("%.2fs", secs));
  if (o.pass) o.detail = std::to_string(count) + " golden formulas, 100 reordered pairs";
  return o;
}

Outcome gradient_validation() {
  const auto start = Clock::now();
  Outcome o;
  std::string summary;
  for (Objective obj : {Objective::kInfoGraph, Objective::kGraphCl, Objective::kBgrl}) {
    Rng rng(101 + static_cast<std::uint64_t>(obj));
    const auto graphs = random_graphs(rng, 4, 6, kEmbeddingDim);
    const EncoderParams params = EncoderParams::initialize(obj, kEmbeddingDim, 31);
    Rng batch_rng(5);
    const std::vector<std::size_t> members{0, 1, 2, 3};
    ContrastiveBatch batch = make_batch(obj, graphs, members, AugmentConfig{}, batch_rng);
    GradCheckOptions opts;
    opts.coordinates = 256;
    opts.seed = 17;
    const GradCheckReport r =
        grad_check(make_batch_evaluator(params, std::move(batch), 0.5), flatten(params, true), opts);
    const std::string name(objective_name(obj));
    o.require(r.checked >= kGradCoordinates, name + " checked only " + std::to_string(r.checked));
    o.require(r.max_relative_error < kGradTolerance, name + " error " + fmt("%.3g", r.max_relative_error));
    summary += (summary.empty() ? "" : ", ") + name + " " + fmt("%.2g", r.max_relative_error) + " over " +
               std::to_string(r.checked);
  }
  const double secs = seconds_since(start);
  o.require(secs < kGradSeconds, "runtime " + fmt("%.1fs", secs));
  if (o.pass) o.detail = summary;
  return o;
}

Outcome objective_counters() {
  Outcome o;
  Rng rng(7);
  const auto graphs = random_graphs(rng, 24, 7, 16);
  auto run = [&](Objective obj) {
    TrainConfig c;
    c.objective = obj;
    c.epochs = 3;
    c.batch_size = 8;
    c.dim = 16;
    return train(graphs, c).counters;
  };
  const TrainCounters ig = run(Objective::kInfoGraph);
  const TrainCounters gc = run(Objective::kGraphCl);
  const TrainCounters bg = run(Objective::kBgrl);
  o.require(ig.augmentations == 0, "infograph augmented " + std::to_string(ig.augmentations));
  o.require(ig.negative_pairs > 0, "infograph used no negatives");
  o.require(gc.negative_pairs > 0, "graphcl used no negatives");
  o.require(bg.negative_pairs == 0, "bgrl negatives " + std::to_string(bg.negative_pairs));
  o.require(gc.views_encoded == 2 * gc.graphs_seen, "graphcl views " + std::to_string(gc.views_encoded) +
                                                        " for " + std::to_string(gc.graphs_seen) + " graphs");
  o.require(ig.ema_updates == 0 && gc.ema_updates == 0, "EMA outside bgrl");
  o.require(bg.ema_updates == bg.optimizer_steps && bg.ema_updates > 0, "bgrl EMA count");
  if (o.pass) {
    o.detail = "graphcl " + std::to_string(gc.views_encoded) + " views/" + std::to_string(gc.graphs_seen) +
               " graphs, bgrl " + std::to_string(bg.ema_updates) + " EMA updates";
  }
  return o;
}

Outcome ema_closed_form() {
  Outcome o;
  const struct {
    double c, decay;
    int k;
  } cases[] = {{1.0, 0.99, 10}, {-2.5, 0.9, 50}, {0.3, 0.5, 7}, {4.0, 0.999, 200}, {1e-3, 0.0, 3}};
  double worst = 0.0;
  for (const auto& tc : cases) {
    EncoderWeights target = EncoderWeights::zeros(8);
    EncoderWeights online = EncoderWeights::zeros(8);
    for (Matrix* m : {&online.w1, &online.b1, &online.w2, &online.b2, &online.relations}) m->setConstant(tc.c);
    for (int i = 0; i < tc.k; ++i) ema_update(target, online, tc.decay);
    const double expected = tc.c * (1.0 - std::pow(tc.decay, tc.k));
    for (const Matrix* m : {&target.w1, &target.b1, &target.w2, &target.b2, &target.relations}) {
      worst = std::max(worst, (m->array() - expected).abs().maxCoeff());
    }
  }
  o.require(worst <= kEmaTolerance, "max gap " + fmt("%.3g", worst));
  if (o.pass) o.detail = "5 cases, max gap " + fmt("%.2g", worst);
  return o;
}

Outcome index_exactness() {
  Outcome o;
  Rng rng(99);
  std::vector<FormulaEmbedding> items;
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> v(kEmbeddingDim);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    char id[16];
    std::snprintf(id, sizeof id, "d%05d", i);
    items.push_back(FormulaEmbedding{id, std::move(v), Provenance::kGcl, Layout::kSlt});
  }
  const EmbeddingIndex idx = EmbeddingIndex::build(items);
  std::size_t disagreements = 0, prefix_breaks = 0;
  for (int q = 0; q < 1000; ++q) {
    std::vector<double> query(kEmbeddingDim);
    for (double& x : query) x = rng.uniform(-1.0, 1.0);
    std::vector<std::pair<double, std::size_t>> scan;
    double qn = 0.0;
    for (double x : query) qn += x * x;
    for (std::size_t i = 0; i < items.size(); ++i) {
      double dot = 0.0, en = 0.0;
      for (std::size_t j = 0; j < query.size(); ++j) {
        dot += items[i].vector[j] * query[j];
        en += items[i].vector[j] * items[i].vector[j];
      }
      scan.emplace_back(dot / std::sqrt(qn * en), i);
    }
    std::sort(scan.begin(), scan.end(), [&](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : items[a.second].id < items[b.second].id;
    });
    const RankedList deepest = query_topk(idx, query, 100);
    for (std::size_t k : {1u, 10u, 100u}) {
      const RankedList r = query_topk(idx, query, k);
      for (std::size_t i = 0; i < k; ++i) {
        if (r.items[i].id != items[scan[i].second].id || std::abs(r.items[i].score - scan[i].first) > 1e-6) {
          ++disagreements;
        }
        if (r.items[i].id != deepest.items[i].id || r.items[i].score != deepest.items[i].score) ++prefix_breaks;
      }
    }
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " oracle disagreements");
  o.require(prefix_breaks == 0, std::to_string(prefix_breaks) + " prefix violations");
  if (o.pass) o.detail = "1000 queries x k in {1,10,100} over 2000 rows";
  return o;
}

struct PipelineRuns {
  PipelineConfig config;
  PipelineResult first;
  fs::path first_dir, second_dir;
};

double chance_bpref(const PipelineConfig& config) {
  const std::vector<CorpusRecord> corpus = read_corpus(config.corpus);
  const QrelSet qrels = read_qrels(config.qrels);
  double total = 0.0;
  for (std::size_t s = 0; s < kChanceSeeds; ++s) {
    Rng rng(1000 + s);
    std::vector<FormulaEmbedding> items;
    for (const CorpusRecord& r : corpus) {
      std::vector<double> v(kEmbeddingDim);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      items.push_back(FormulaEmbedding{r.id, std::move(v), Provenance::kGcl, Layout::kSlt});
    }
    const EmbeddingIndex idx = EmbeddingIndex::build(items);
    RunFile run;
    for (const std::string& qid : qrels.query_ids()) {
      const auto pos = idx.find(qid);
      if (!pos) continue;
      run[qid] = query_topk(idx, items[*pos].vector, kEvalDepth, qid).items;
    }
    total += evaluate_trial(run, qrels).mean_bpref;
  }
  return total / double(kChanceSeeds);
}

Outcome synthetic_benchmark(PipelineRuns& runs) {
  const auto start = Clock::now();
  Outcome o;
  runs.config = PipelineConfig::load(testing::source_dir() / "data/synthetic/demo.json");
  runs.first_dir = testing::scratch_dir("accept_a");
  runs.config.output_dir = runs.first_dir;
  runs.first = run_pipeline(runs.config);
  const double chance = chance_bpref(runs.config);
  const std::vector<CorpusRecord> corpus = read_corpus(runs.config.corpus);
  std::string summary = "chance " + fmt("%.3f", chance);
  for (const LayoutRun& lr : runs.first.layouts) {
    const std::string lname(layout_name(lr.layout));
    double baseline = 0.0;
    for (const ModelRun& m : lr.models) {
      if (m.model == kBaselineModel && m.metrics) baseline = m.metrics->bpref.mean;
    }
    for (const ModelRun& m : lr.models) {
      if (m.model == kBaselineModel) continue;
      const std::string tag = lname + "/" + m.model;
      const double ratio = m.loss_curve.back() / m.loss_curve.front();
      o.require(ratio <= kLossRatio, tag + " loss ratio " + fmt("%.3f", ratio));

      const QueryArtifacts art = load_query_artifacts(lr.tokens, m.checkpoint, m.index);
      std::size_t rank1 = 0;
      double worst_score = 0.0;
      for (const CorpusRecord& r : corpus) {
        const RankedList hit = query_pipeline(art, r.latex, lr.layout, 1, r.id);
        if (hit.items.at(0).id == r.id) ++rank1;
        worst_score = std::max(worst_score, std::abs(hit.items.at(0).score - 1.0));
      }
      o.require(rank1 == corpus.size(), tag + " self rank1 " + std::to_string(rank1) + "/" +
                                            std::to_string(corpus.size()));
      o.require(worst_score <= kSelfScoreTolerance, tag + " self score gap " + fmt("%.3g", worst_score));

      const double b = m.metrics ? m.metrics->bpref.mean : 0.0;
      o.require(b >= baseline - kBaselineMargin,
                tag + " bpref " + fmt("%.4f", b) + " below baseline " + fmt("%.4f", baseline));
      o.require(b >= kChanceFactor * chance, tag + " bpref " + fmt("%.4f", b) + " below 2x chance");
      summary += "; " + tag + " ratio " + fmt("%.3f", ratio) + " bpref " + fmt("%.4f", b);
    }
    summary += "; " + lname + "/baseline bpref " + fmt("%.4f", baseline);
  }
  const double secs = seconds_since(start);
  o.require(secs < kBenchmarkSeconds, "runtime " + fmt("%.0fs", secs));
  if (o.pass) o.detail = summary;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome reproducibility(PipelineRuns& runs) {
  Outcome o;
  if (runs.first_dir.empty()) {
    o.require(false, "benchmark run unavailable");
    return o;
  }
  runs.second_dir = testing::scratch_dir("accept_b");
  PipelineConfig again = runs.config;
  again.output_dir = runs.second_dir;
  run_pipeline(again);
  std::size_t compared = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(runs.first_dir)) {
    const std::string ext = entry.path().extension().string();
    if (ext != ".mgte" && ext != ".mgcp" && ext != ".mgri") continue;
    const fs::path rel = fs::relative(entry.path(), runs.first_dir);
    ++compared;
    if (slurp(entry.path()) != slurp(runs.second_dir / rel)) {
      ++differing;
      o.require(false, rel.string() + " differs");
    }
  }
  o.require(compared >= 2 + 2 * 3 + 2 * 4, "only " + std::to_string(compared) + " artifacts compared");
  if (o.pass) o.detail = std::to_string(compared) + " table/checkpoint/index files byte-identical";
  return o;
}

}  // namespace

int main() {
  set_log_sink(nullptr);
  PipelineRuns runs;
  report("metric_oracle", metric_oracle);
  report("f1_fixture", f1_fixture);
  report("parser_golden", parser_golden);
  report("gradient_validation", gradient_validation);
  report("objective_counters", objective_counters);
  report("ema_closed_form", ema_closed_form);
  report("synthetic_benchmark", [&] { return synthetic_benchmark(runs); });
  report("index_exactness", index_exactness);
  report("reproducibility", [&] { return reproducibility(runs); });
  for (const fs::path& d : {runs.first_dir, runs.second_dir}) {
    if (!d.empty()) fs::remove_all(d);
  }
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
