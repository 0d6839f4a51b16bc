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

#include "mathgcl/trainer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mathgcl/augment.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/objectives.hpp"

namespace mathgcl {
namespace {

ViewInput make_view(const TrainingGraph& base, AugmentedView view) {
  Matrix features(static_cast<Eigen::Index>(view.graph.node_count()), base.features.cols());
  for (std::size_t i = 0; i < view.origin.size(); ++i) {
    features.row(static_cast<Eigen::Index>(i)) = base.features.row(static_cast<Eigen::Index>(view.origin[i]));
  }
  return ViewInput{make_graph_input(view.graph, features), std::move(view.origin)};
}

AugmentedView augment_once(const FormulaGraph& graph, const AugmentConfig& config, Rng& rng) {
  const std::uint64_t seed = rng.next_u64();
  if (rng.uniform_index(2) == 0) return drop_nodes(graph, config.node_drop_ratio, seed);
  return perturb_edges(graph, config.edge_perturb_ratio, seed);
}

std::uint64_t fold_pattern(std::uint64_t h, const EncoderCache& c) {
  h = hash_activation_mask(h, c.pre1);
  return hash_activation_mask(h, c.pre2);
}

void evaluate_infograph(const EncoderParams& params, const ContrastiveBatch& batch,
                        BatchEvaluation& out) {
  std::vector<EncoderCache> caches;
  std::vector<Matrix> nodes;
  Matrix graphs(static_cast<Eigen::Index>(batch.graphs.size()), static_cast<Eigen::Index>(params.dim()));
  for (std::size_t g = 0; g < batch.graphs.size(); ++g) {
    caches.push_back(encode_forward(params.online, batch.graphs[g]));
    out.activation_pattern = fold_pattern(out.activation_pattern, caches.back());
    nodes.push_back(caches.back().h2);
    graphs.row(static_cast<Eigen::Index>(g)) = caches.back().z.transpose();
  }
  out.views_encoded = batch.graphs.size();
  InfoGraphResult r = infograph_loss(nodes, graphs, params.discriminator);
  out.loss = r.loss;
  out.negative_pairs = r.negative_pairs;
  out.grad.discriminator += r.d_discriminator;
  for (std::size_t g = 0; g < batch.graphs.size(); ++g) {
    encode_backward(params.online, batch.graphs[g], caches[g], r.d_nodes[g],
                    r.d_graphs.row(static_cast<Eigen::Index>(g)).transpose(), out.grad.online);
  }
}

void evaluate_graphcl(const EncoderParams& params, const ContrastiveBatch& batch, double tau,
                      BatchEvaluation& out) {
  const std::size_t m = 2 * batch.pairs.size();
  std::vector<EncoderCache> caches;
  Matrix z(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(params.dim()));
  for (std::size_t g = 0; g < batch.pairs.size(); ++g) {
    for (std::size_t v = 0; v < 2; ++v) {
      caches.push_back(encode_forward(params.online, batch.pairs[g][v].input));
      out.activation_pattern = fold_pattern(out.activation_pattern, caches.back());
      z.row(static_cast<Eigen::Index>(2 * g + v)) = caches.back().z.transpose();
    }
  }
  out.views_encoded = m;
  const MlpCache proj = mlp_forward(params.projector, z);
  out.activation_pattern = hash_activation_mask(out.activation_pattern, proj.pre);
  GraphClResult r = graphcl_loss(proj.output, tau);
  out.loss = r.loss;
  out.negative_pairs = r.negative_pairs;
  const Matrix d_z = mlp_backward(params.projector, proj, r.d_views, out.grad.projector);
  for (std::size_t g = 0; g < batch.pairs.size(); ++g) {
    for (std::size_t v = 0; v < 2; ++v) {
      const std::size_t i = 2 * g + v;
      const ViewInput& view = batch.pairs[g][v];
      const Matrix d_nodes = Matrix::Zero(static_cast<Eigen::Index>(view.input.node_count()), z.cols());
      encode_backward(params.online, view.input, caches[i], d_nodes,
                      d_z.row(static_cast<Eigen::Index>(i)).transpose(), out.grad.online);
    }
  }
}

void evaluate_bgrl(const EncoderParams& params, const ContrastiveBatch& batch, BatchEvaluation& out) {
  const double inv = 1.0 / static_cast<double>(batch.pairs.size());
  const Eigen::VectorXd no_graph_grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.dim()));
  for (const auto& pair : batch.pairs) {
    const NodePairs shared = shared_nodes(pair[0].origin, pair[1].origin);
    std::array<EncoderCache, 2> online;
    std::array<MlpCache, 2> pred;
    std::array<Matrix, 2> target;
    for (std::size_t v = 0; v < 2; ++v) {
      online[v] = encode_forward(params.online, pair[v].input);
      out.activation_pattern = fold_pattern(out.activation_pattern, online[v]);
      pred[v] = mlp_forward(params.predictor, online[v].h2);
      out.activation_pattern = hash_activation_mask(out.activation_pattern, pred[v].pre);
      target[v] = encode_forward(params.target, pair[v].input).h2;
    }
    out.views_encoded += 2;
    BgrlResult r = bgrl_loss(pred[0].output, target[1], pred[1].output, target[0], shared);
    out.loss += r.loss * inv;
    const std::array<Matrix, 2> d_pred{r.d_pred_a * inv, r.d_pred_b * inv};
    for (std::size_t v = 0; v < 2; ++v) {
      const Matrix d_h = mlp_backward(params.predictor, pred[v], d_pred[v], out.grad.predictor);
      encode_backward(params.online, pair[v].input, online[v], d_h, no_graph_grad, out.grad.online);
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); };
  if (epochs == 0) fail("epochs must be >= 1");
  if (batch_size == 0) fail("batch size must be >= 1");
  if (dim == 0) fail("dim must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning rate must be > 0");
  if (!(temperature > 0.0)) fail("temperature must be > 0");
  if (!(ema_decay >= 0.0 && ema_decay < 1.0)) fail("EMA decay must lie in [0, 1)");
  if (!(augment.node_drop_ratio >= 0.0 && augment.node_drop_ratio < 1.0)) {
    fail("node drop ratio must lie in [0, 1)");
  }
  if (!(augment.edge_perturb_ratio >= 0.0 && augment.edge_perturb_ratio < 1.0)) {
    fail("edge perturb ratio must lie in [0, 1)");
  }
}

bool uses_negatives(Objective objective) noexcept { return objective != Objective::kBgrl; }
bool uses_augmentation(Objective objective) noexcept { return objective != Objective::kInfoGraph; }

std::vector<TrainingGraph> attach_features(std::span<const FormulaGraph> graphs,
                                           const EmbeddingTable& table) {
  std::vector<TrainingGraph> out;
  out.reserve(graphs.size());
  for (const FormulaGraph& g : graphs) out.push_back(TrainingGraph{g, node_features(g, table)});
  return out;
}

ContrastiveBatch make_batch(Objective objective, std::span<const TrainingGraph> graphs,
                            std::span<const std::size_t> members, const AugmentConfig& augment,
                            Rng& rng) {
  ContrastiveBatch batch;
  batch.objective = objective;
  for (std::size_t idx : members) {
    const TrainingGraph& base = graphs[idx];
    if (!uses_augmentation(objective)) {
      batch.graphs.push_back(make_graph_input(base.graph, base.features));
      continue;
    }
    std::array<ViewInput, 2> views;
    for (auto& v : views) {
      v = make_view(base, augment_once(base.graph, augment, rng));
      ++batch.augmentations;
    }
    batch.pairs.push_back(std::move(views));
  }
  return batch;
}

BatchEvaluation evaluate_batch(const EncoderParams& params, const ContrastiveBatch& batch,
                               double temperature) {
  if (params.objective != batch.objective) {
    throw Error(ErrorCode::kInvalidArgument, "batch was drawn for a different objective");
  }
  BatchEvaluation out;
  out.grad = EncoderParams::zeros_like(params);
  switch (batch.objective) {
    case Objective::kInfoGraph: evaluate_infograph(params, batch, out); break;
    case Objective::kGraphCl: evaluate_graphcl(params, batch, temperature, out); break;
    case Objective::kBgrl: evaluate_bgrl(params, batch, out); break;
  }
  return out;
}

GradEvaluator make_batch_evaluator(const EncoderParams& params, ContrastiveBatch batch,
                                   double temperature) {
  return [params, batch = std::move(batch), temperature](std::span<const double> theta) {
    EncoderParams p = params;
    unflatten(p, theta, true);
    BatchEvaluation e = evaluate_batch(p, batch, temperature);
    return GradEvaluation{e.loss, flatten(e.grad, true), e.activation_pattern};
  };
}

TrainResult train(std::span<const TrainingGraph> graphs, const TrainConfig& config,
                  const std::function<void(const EpochReport&)>& on_epoch) {
  config.validate();
  if (graphs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no training graphs");
  if (uses_negatives(config.objective) && graphs.size() < 2) {
    throw Error(ErrorCode::kBatchTooSmall,
                std::string(objective_name(config.objective)) + " needs at least 2 graphs");
  }
  for (const TrainingGraph& g : graphs) {
    if (g.features.cols() != static_cast<Eigen::Index>(config.dim)) {
      throw Error(ErrorCode::kDimensionMismatch, "feature width differs from encoder dim");
    }
  }

  TrainResult result;
  result.params = EncoderParams::initialize(config.objective, config.dim, config.seed);
  Adam adam(config.learning_rate);
  Rng order_rng(derive_seed(config.seed, 0x6f72));
  Rng augment_rng(derive_seed(config.seed ^ mix_seed(config.augment.seed), 0x6175));

  std::vector<std::size_t> order(graphs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t min_batch = uses_negatives(config.objective) ? 2 : 1;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(order);
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      spans.emplace_back(start, std::min(order.size(), start + config.batch_size));
    }
    if (spans.size() > 1 && spans.back().second - spans.back().first < min_batch) {
      spans[spans.size() - 2].second = spans.back().second;
      spans.pop_back();
    }
    if (spans.back().second - spans.back().first < min_batch) {
      throw Error(ErrorCode::kBatchTooSmall, "batch size must be >= 2 for objectives with negatives");
    }

    double weighted = 0.0;
    for (const auto& [begin, end] : spans) {
      const std::span<const std::size_t> members(order.data() + begin, end - begin);
      const ContrastiveBatch batch =
          make_batch(config.objective, graphs, members, config.augment, augment_rng);
      BatchEvaluation e = evaluate_batch(result.params, batch, config.temperature);
      if (!std::isfinite(e.loss) || !e.grad.all_finite()) {
        std::ostringstream msg;
        msg << "loss " << e.loss << " at epoch " << epoch + 1 << ", step "
            << result.counters.optimizer_steps + 1 << " (" << objective_name(config.objective)
            << ", lr " << config.learning_rate << ")";
        throw Error(ErrorCode::kNonFiniteLoss, msg.str());
      }
      adam.step(result.params, e.grad);
      ++result.counters.optimizer_steps;
      if (config.objective == Objective::kBgrl) {
        ema_update(result.params.target, result.params.online, config.ema_decay);
        ++result.counters.ema_updates;
      }
      result.counters.augmentations += batch.augmentations;
      result.counters.negative_pairs += e.negative_pairs;
      result.counters.views_encoded += e.views_encoded;
      result.counters.graphs_seen += members.size();
      weighted += e.loss * static_cast<double>(members.size());
    }
    const double mean = weighted / static_cast<double>(order.size());
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(EpochReport{epoch + 1, mean});
  }
  return result;
}

}  // namespace mathgcl
