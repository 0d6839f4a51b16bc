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
#include <map>
#include <set>

#include "mathgcl/augment.hpp"
#include "mathgcl/encoder.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/formula_embedding.hpp"
#include "mathgcl/gcl_params.hpp"
#include "mathgcl/grad_check.hpp"
#include "mathgcl/objectives.hpp"
#include "mathgcl/trainer.hpp"
#include "support/test_support.hpp"

namespace mathgcl {
namespace {

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

std::vector<TrainingGraph> random_graphs(Rng& rng, std::size_t count, std::size_t nodes,
                                         std::size_t dim, Layout layout = Layout::kSlt) {
  std::vector<TrainingGraph> out;
  for (std::size_t i = 0; i < count; ++i) {
    FormulaGraph g = testing::random_tree(rng, nodes, layout);
    out.push_back(TrainingGraph{g, random_matrix(rng, Eigen::Index(nodes), Eigen::Index(dim))});
  }
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Encoder

TEST(Encoder, PermutationInvariantReadout) {
  Rng rng(3);
  const std::size_t dim = 12;
  const EncoderWeights w = EncoderWeights::random(dim, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const FormulaGraph g = testing::random_tree(rng, 9, trial % 2 ? Layout::kOpt : Layout::kSlt);
    const Matrix x = random_matrix(rng, 9, dim);
    std::vector<std::size_t> perm(9);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    FormulaGraph p = g;
    Matrix px(9, dim);
    for (std::size_t i = 0; i < 9; ++i) {
      p.nodes[perm[i]] = g.nodes[i];
      px.row(Eigen::Index(perm[i])) = x.row(Eigen::Index(i));
    }
    for (Edge& e : p.edges) {
      e.src = perm[e.src];
      e.dst = perm[e.dst];
    }
    p.root = perm[g.root];
    const Encoding a = encode(w, g, x);
    const Encoding b = encode(w, p, px);
    EXPECT_LE((a.graph - b.graph).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Encoder, SingleNodeReadoutIsNodeRow) {
  Rng rng(4);
  const EncoderWeights w = EncoderWeights::random(8, rng);
  FormulaGraph g;
  g.nodes.push_back(MathToken::parse("V!x"));
  const Encoding e = encode(w, g, random_matrix(rng, 1, 8));
  EXPECT_EQ(Matrix(e.graph.transpose()), Matrix(e.nodes.row(0)));
}

TEST(Encoder, SymmetricGraphGivesEqualRows) {
  Rng rng(5);
  const EncoderWeights w = EncoderWeights::random(8, rng);
  FormulaGraph g;
  g.nodes = {MathToken::parse("V!a"), MathToken::parse("V!a")};
  g.edges = {Edge{0, 1, {}}};
  Matrix x(2, 8);
  x.row(0) = random_matrix(rng, 1, 8);
  x.row(1) = x.row(0);
  const Encoding e = encode(w, g, x);
  EXPECT_EQ(Matrix(e.nodes.row(0)), Matrix(e.nodes.row(1)));
}

TEST(Encoder, RejectsBadInput) {
  Rng rng(6);
  const EncoderWeights w = EncoderWeights::random(8, rng);
  EXPECT_EQ(code_of([&] { encode(w, FormulaGraph{}, Matrix(0, 8)); }), ErrorCode::kEmptyGraph);
  FormulaGraph g;
  g.nodes.push_back(MathToken::parse("V!x"));
  EXPECT_EQ(code_of([&] { encode(w, g, Matrix::Zero(2, 8)); }), ErrorCode::kDimensionMismatch);
}

// Augmentations

FormulaGraph path_graph(std::size_t n) {
  FormulaGraph g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back(MathToken{TokenKind::kVariable, "v"});
  for (std::size_t i = 1; i < n; ++i) g.edges.push_back(Edge{i - 1, i, {}});
  return g;
}

TEST(Augment, DropTenNodes) {
  Rng rng(1);
  const FormulaGraph g = testing::random_tree(rng, 10, Layout::kSlt);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const AugmentedView v = drop_nodes(g, 0.2, seed);
    EXPECT_EQ(v.graph.node_count(), 8u);
    EXPECT_NE(std::find(v.origin.begin(), v.origin.end(), g.root), v.origin.end());
    EXPECT_TRUE(testing::is_rooted_tree(v.graph));
  }
}

TEST(Augment, ZeroRatioIsIdentity) {
  Rng rng(2);
  const FormulaGraph g = testing::random_tree(rng, 10, Layout::kOpt);
  EXPECT_EQ(drop_nodes(g, 0.0, 4).graph, g);
  EXPECT_EQ(perturb_edges(g, 0.0, 4).graph, g);
}

TEST(Augment, FiveNodePathStaysConnected) {
  const FormulaGraph g = path_graph(5);
  std::set<std::vector<NodeId>> outcomes;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const AugmentedView v = drop_nodes(g, 0.2, seed);
    ASSERT_EQ(v.graph.node_count(), 4u);
    EXPECT_TRUE(testing::is_rooted_tree(v.graph));
    outcomes.insert(v.origin);
  }
  // Each of the four non-root nodes can be dropped.
  EXPECT_EQ(outcomes.size(), 4u);
}

TEST(Augment, PerturbChangesExactlyTwoEdges) {
  Rng rng(7);
  const FormulaGraph g = testing::random_tree(rng, 11, Layout::kSlt);
  ASSERT_EQ(g.edge_count(), 10u);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const FormulaGraph p = perturb_edges(g, 0.2, seed).graph;
    std::map<NodeId, std::pair<NodeId, std::string>> before, after;
    for (const Edge& e : g.edges) before[e.dst] = {e.src, e.rel.str()};
    for (const Edge& e : p.edges) after[e.dst] = {e.src, e.rel.str()};
    std::size_t changed = 0;
    for (const auto& [dst, edge] : before) changed += after.at(dst) != edge;
    EXPECT_EQ(changed, 2u) << "seed " << seed;
  }
}

TEST(Augment, OutputsAreAlwaysTrees) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Layout layout = i % 2 ? Layout::kOpt : Layout::kSlt;
    const FormulaGraph g = testing::random_tree(rng, 1 + rng.uniform_index(25), layout);
    const std::uint64_t seed = rng.next_u64();
    const AugmentedView d = drop_nodes(g, 0.3, seed);
    const AugmentedView p = perturb_edges(g, 0.3, seed);
    const AugmentedView both = perturb_edges(d, 0.2, seed + 1);
    for (const AugmentedView* v : {&d, &p, &both}) {
      ASSERT_TRUE(testing::is_rooted_tree(v->graph)) << "iteration " << i;
      ASSERT_TRUE(v->graph.is_valid()) << *v->graph.validation_error();
      ASSERT_EQ(v->origin.size(), v->graph.node_count());
    }
  }
}

// Objectives

TEST(InfoGraph, ZeroCriticGivesTwoLnTwo) {
  Rng rng(9);
  const std::vector<Matrix> nodes{random_matrix(rng, 3, 4), random_matrix(rng, 5, 4)};
  const InfoGraphResult r = infograph_loss(nodes, random_matrix(rng, 2, 4), Matrix::Zero(4, 4));
  EXPECT_NEAR(r.loss, 2.0 * std::log(2.0), 1e-12);
  EXPECT_EQ(r.negative_pairs, 8u);
}

TEST(InfoGraph, SeparatedScoresDriveLossToZero) {
  Matrix h0(1, 2), h1(1, 2), z(2, 2);
  h0 << 1, -1;
  h1 << -1, 1;
  z << 1, -1, -1, 1;
  const std::vector<Matrix> nodes{h0, h1};
  const InfoGraphResult r = infograph_loss(nodes, z, 20.0 * Matrix::Identity(2, 2));
  EXPECT_GT(r.loss, 0.0);
  EXPECT_LT(r.loss, 1e-10);
}

TEST(InfoGraph, SingleGraphBatchRejected) {
  const std::vector<Matrix> nodes{Matrix::Ones(2, 3)};
  EXPECT_EQ(code_of([&] { infograph_loss(nodes, Matrix::Ones(1, 3), Matrix::Zero(3, 3)); }),
            ErrorCode::kBatchTooSmall);
}

TEST(GraphCl, HandEvaluatedAnchor) {
  Matrix v = Matrix::Zero(4, 3);
  v(0, 0) = v(1, 0) = 1.0;
  v(2, 1) = v(3, 1) = 1.0;
  const GraphClResult r = graphcl_loss(v, 0.5);
  for (double l : r.anchor_losses) EXPECT_NEAR(l, std::log(1.0 + 2.0 * std::exp(-2.0)), 1e-12);
  EXPECT_NEAR(r.loss, 0.2395447662, 1e-9);
  EXPECT_EQ(r.negative_pairs, 8u);
}

TEST(GraphCl, IdenticalViewsGiveLnThree) {
  const GraphClResult r = graphcl_loss(Matrix::Ones(4, 5), 0.5);
  EXPECT_NEAR(r.loss, std::log(3.0), 1e-12);
}

TEST(GraphCl, LargeTemperatureApproachesUniform) {
  Rng rng(10);
  const GraphClResult r = graphcl_loss(random_matrix(rng, 4, 5), 1e9);
  EXPECT_NEAR(r.loss, std::log(3.0), 1e-6);
}

TEST(GraphCl, NeedsTwoGraphs) {
  EXPECT_EQ(code_of([] { graphcl_loss(Matrix::Ones(2, 3), 0.5); }), ErrorCode::kBatchTooSmall);
}

TEST(Bgrl, PerfectAndOrthogonalPredictions) {
  Rng rng(11);
  const Matrix a = random_matrix(rng, 4, 6);
  const Matrix b = random_matrix(rng, 4, 6);
  const NodePairs all{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_NEAR(bgrl_loss(a, a, b, b, all).loss, 0.0, 1e-12);
  Matrix x = Matrix::Zero(2, 4), y = Matrix::Zero(2, 4);
  x(0, 0) = x(1, 1) = 1.0;
  y(0, 2) = y(1, 3) = 1.0;
  const NodePairs two{{0, 0}, {1, 1}};
  EXPECT_NEAR(bgrl_loss(x, y, x, y, two).loss, 4.0, 1e-12);
  EXPECT_EQ(code_of([&] { bgrl_loss(x, y, x, y, NodePairs{}); }), ErrorCode::kNoSharedNodes);
}

TEST(Bgrl, SharedNodesFollowOrigins) {
  const std::vector<std::size_t> a{0, 2, 3, 5};
  const std::vector<std::size_t> b{0, 1, 3, 4, 5};
  const NodePairs expected{{0, 0}, {2, 2}, {3, 4}};
  EXPECT_EQ(shared_nodes(a, b), expected);
}

TEST(Bgrl, TargetReceivesNoGradient) {
  Rng rng(12);
  const auto graphs = random_graphs(rng, 3, 6, 8);
  EncoderParams params = EncoderParams::initialize(Objective::kBgrl, 8, 3);
  for (auto& [name, t] : tensors(params, false)) {
    if (name.rfind("target.", 0) == 0) *t = random_matrix(rng, t->rows(), t->cols());
  }
  Rng batch_rng(1);
  const std::vector<std::size_t> members{0, 1, 2};
  const ContrastiveBatch batch = make_batch(Objective::kBgrl, graphs, members, AugmentConfig{}, batch_rng);
  const BatchEvaluation eval = evaluate_batch(params, batch, 0.5);
  std::size_t target_tensors = 0;
  for (const auto& [name, t] : tensors(std::as_const(eval.grad), false)) {
    if (name.rfind("target.", 0) != 0) continue;
    ++target_tensors;
    EXPECT_EQ(t->cwiseAbs().maxCoeff(), 0.0) << name;
  }
  EXPECT_GT(target_tensors, 0u);
}

// EMA

TEST(Ema, SingleStepAndCopy) {
  EncoderWeights target = EncoderWeights::zeros(4);
  EncoderWeights online = EncoderWeights::zeros(4);
  for (Matrix* m : {&online.w1, &online.b1, &online.w2, &online.b2, &online.relations}) m->setOnes();
  ema_update(target, online, 0.99);
  EXPECT_NEAR(target.w1(0, 0), 0.01, 1e-15);
  EXPECT_NEAR(target.relations(3, 2), 0.01, 1e-15);
  ema_update(target, online, 0.0);
  EXPECT_EQ(target.w2, online.w2);
  EXPECT_EQ(target.b1, online.b1);
}

TEST(Ema, GeometricClosedForm) {
  const struct {
    double c, decay;
    int k;
  } cases[] = {{1.0, 0.99, 10}, {-2.5, 0.9, 50}, {0.3, 0.5, 7}, {4.0, 0.999, 200}, {1e-3, 0.0, 3}};
  for (const auto& tc : cases) {
    EncoderWeights target = EncoderWeights::zeros(3);
    EncoderWeights online = EncoderWeights::zeros(3);
    online.w1.setConstant(tc.c);
    for (int i = 0; i < tc.k; ++i) ema_update(target, online, tc.decay);
    const double expected = tc.c * (1.0 - std::pow(tc.decay, tc.k));
    EXPECT_LE((target.w1.array() - expected).abs().maxCoeff(), 1e-12);
  }
}

TEST(Ema, ShapeMismatchRejected) {
  EncoderWeights a = EncoderWeights::zeros(3);
  const EncoderWeights b = EncoderWeights::zeros(4);
  EXPECT_EQ(code_of([&] { ema_update(a, b, 0.5); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { ema_update(a, a, 1.5); }), ErrorCode::kInvalidArgument);
}

// Gradient checks

TEST(GradCheck, QuadraticIsExact) {
  const GradEvaluator quad = [](std::span<const double> t) {
    GradEvaluation e;
    for (double x : t) {
      e.value += x * x;
      e.gradient.push_back(2.0 * x);
    }
    return e;
  };
  Rng rng(13);
  std::vector<double> theta(50);
  // Near-zero coordinates sit at the rounding floor of the summed loss
  // (about ulp(sum) / 2e-5), so magnitudes are kept at or above 0.5.
  for (double& x : theta) x = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 3.0);
  const GradCheckReport r = grad_check(quad, theta);
  EXPECT_EQ(r.checked, 50u);
  EXPECT_LT(r.max_relative_error, 1e-8);
}

TEST(GradCheck, KinksAreResampled) {
  const GradEvaluator relu_sum = [](std::span<const double> t) {
    GradEvaluation e;
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      e.value += std::max(t[i], 0.0);
      e.gradient.push_back(t[i] > 0.0 ? 1.0 : 0.0);
      if (t[i] > 0.0) mask |= 1ull << i;
    }
    e.pattern = mask;
    return e;
  };
  const std::vector<double> theta{0.0, 1.0, -1.0, 0.0, 2.0, 0.0};
  GradCheckOptions opts;
  opts.coordinates = 3;
  const GradCheckReport r = grad_check(relu_sum, theta, opts);
  EXPECT_GT(r.kinks_skipped, 0u);
  EXPECT_EQ(r.checked, 3u);
  EXPECT_LT(r.max_relative_error, 1e-4);
}

class ObjectiveGradients : public ::testing::TestWithParam<Objective> {};

TEST_P(ObjectiveGradients, MatchFiniteDifferences) {
  Rng rng(14);
  const auto graphs = random_graphs(rng, 4, 6, 8);
  const EncoderParams params = EncoderParams::initialize(GetParam(), 8, 21);
  Rng batch_rng(2);
  const std::vector<std::size_t> members{0, 1, 2, 3};
  ContrastiveBatch batch = make_batch(GetParam(), graphs, members, AugmentConfig{}, batch_rng);
  const std::vector<double> theta = flatten(params, true);
  GradCheckOptions opts;
  opts.coordinates = 256;
  opts.seed = 5;
  const GradCheckReport r = grad_check(make_batch_evaluator(params, std::move(batch), 0.5), theta, opts);
  EXPECT_GE(r.checked, 200u);
  EXPECT_LT(r.max_relative_error, 1e-4) << "worst coordinate " << r.worst_coordinate;
}

INSTANTIATE_TEST_SUITE_P(AllObjectives, ObjectiveGradients,
                         ::testing::Values(Objective::kInfoGraph, Objective::kGraphCl, Objective::kBgrl),
                         [](const auto& info) { return std::string(objective_name(info.param)); });

// Training

TrainConfig small_config(Objective objective) {
  TrainConfig c;
  c.objective = objective;
  c.epochs = 3;
  c.batch_size = 4;
  c.learning_rate = 0.01;
  c.dim = 8;
  return c;
}

TEST(Train, DeterministicCurves) {
  Rng rng(15);
  const auto graphs = random_graphs(rng, 10, 5, 8);
  for (Objective obj : {Objective::kInfoGraph, Objective::kGraphCl, Objective::kBgrl}) {
    const TrainResult a = train(graphs, small_config(obj));
    const TrainResult b = train(graphs, small_config(obj));
    EXPECT_EQ(a.epoch_losses, b.epoch_losses);
    EXPECT_EQ(flatten(a.params, false), flatten(b.params, false));
  }
}

TEST(Train, ObjectiveCounters) {
  Rng rng(16);
  const auto graphs = random_graphs(rng, 10, 5, 8);
  const TrainResult ig = train(graphs, small_config(Objective::kInfoGraph));
  const TrainResult gc = train(graphs, small_config(Objective::kGraphCl));
  const TrainResult bg = train(graphs, small_config(Objective::kBgrl));
  EXPECT_EQ(ig.counters.augmentations, 0u);
  EXPECT_GT(ig.counters.negative_pairs, 0u);
  EXPECT_EQ(ig.counters.ema_updates, 0u);
  EXPECT_EQ(gc.counters.views_encoded, 2 * gc.counters.graphs_seen);
  EXPECT_EQ(gc.counters.augmentations, 2 * gc.counters.graphs_seen);
  EXPECT_GT(gc.counters.negative_pairs, 0u);
  EXPECT_EQ(gc.counters.ema_updates, 0u);
  EXPECT_EQ(bg.counters.negative_pairs, 0u);
  EXPECT_EQ(bg.counters.ema_updates, bg.counters.optimizer_steps);
  EXPECT_GT(bg.counters.ema_updates, 0u);
}

TEST(Train, SingleGraphInfoGraphRejected) {
  Rng rng(17);
  const auto graphs = random_graphs(rng, 1, 4, 8);
  EXPECT_EQ(code_of([&] { train(graphs, small_config(Objective::kInfoGraph)); }),
            ErrorCode::kBatchTooSmall);
}

TEST(Train, InvalidConfigRejected) {
  TrainConfig c = small_config(Objective::kGraphCl);
  c.temperature = 0.0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kConfigError);
}

// Checkpoints and embeddings

TEST(Checkpoint, RoundTripAtFloatPrecision) {
  const EncoderParams p = EncoderParams::initialize(Objective::kBgrl, 8, 4);
  const auto dir = testing::scratch_dir("ckpt");
  save_checkpoint(dir / "m.mgcp", p, CheckpointInfo{Objective::kBgrl, Layout::kOpt, 77});
  CheckpointInfo info;
  const EncoderParams back = load_checkpoint(dir / "m.mgcp", &info);
  EXPECT_EQ(info.objective, Objective::kBgrl);
  EXPECT_EQ(info.layout, Layout::kOpt);
  EXPECT_EQ(info.config_hash, 77u);
  const auto a = flatten(p, false);
  const auto b = flatten(back, false);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i], double(float(a[i])));
  std::filesystem::remove_all(dir);
}

TEST(FormulaEmbedding, BaselineIsExactMean) {
  EmbeddingTable table(4, SubwordSpec{}, 1);
  const std::size_t u = table.add_word("V!u");
  const std::size_t v = table.add_word("V!v");
  const float uv[] = {1.0f, 2.5f, -3.0f, 0.125f};  // word rows; lookup adds n-gram rows
  const float vv[] = {0.5f, -1.0f, 7.0f, 0.375f};
  std::copy(uv, uv + 4, table.word_row(u).begin());
  std::copy(vv, vv + 4, table.word_row(v).begin());
  FormulaGraph g;
  g.nodes = {MathToken::parse("V!u"), MathToken::parse("V!v")};
  g.edges = {Edge{0, 1, {}}};
  const FormulaEmbedding e = embed_formula_baseline(g, table, "f");
  EXPECT_EQ(e.provenance, Provenance::kAverageBaseline);
  const auto lu = table.lookup("V!u").vector;
  const auto lv = table.lookup("V!v").vector;
  for (int i = 0; i < 4; ++i) EXPECT_EQ(e.vector[i], (double(lu[i]) + lv[i]) / 2.0);
}

TEST(FormulaEmbedding, GclIsRepeatable) {
  EmbeddingTable table(8, SubwordSpec{}, 1);
  table.add_word("V!a");
  table.add_word("V!b");
  const EncoderParams p = EncoderParams::initialize(Objective::kGraphCl, 8, 2);
  FormulaGraph g;
  g.nodes = {MathToken::parse("V!a"), MathToken::parse("V!b")};
  g.edges = {Edge{0, 1, {}}};
  EXPECT_EQ(embed_formula(p, g, table).vector, embed_formula(p, g, table).vector);
  EXPECT_EQ(embed_formula(p, g, table).vector.size(), 8u);
}

}  // namespace
}  // namespace mathgcl
