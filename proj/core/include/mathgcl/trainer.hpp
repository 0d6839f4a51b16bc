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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mathgcl/embedding_table.hpp"
#include "mathgcl/encoder.hpp"
#include "mathgcl/formula_graph.hpp"
#include "mathgcl/gcl_params.hpp"
#include "mathgcl/grad_check.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {

struct AugmentConfig {
  double node_drop_ratio = 0.2;
  double edge_perturb_ratio = 0.2;
  std::uint64_t seed = 0;
};

struct TrainConfig {
  Objective objective = Objective::kInfoGraph;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double temperature = 0.5;
  double ema_decay = 0.99;
  std::size_t dim = kEmbeddingDim;
  AugmentConfig augment;
  std::uint64_t seed = 7;

  /// Throws kConfigError on out-of-range values.
  void validate() const;
};

bool uses_negatives(Objective objective) noexcept;
bool uses_augmentation(Objective objective) noexcept;

struct TrainingGraph {
  FormulaGraph graph;
  Matrix features;  // |nodes| x dim
};

/// Node features for every graph from a token table.
std::vector<TrainingGraph> attach_features(std::span<const FormulaGraph> graphs,
                                           const EmbeddingTable& table);

struct ViewInput {
  GraphInput input;
  std::vector<NodeId> origin;
};

/// Everything random about one optimizer step, drawn up front so the
/// loss becomes a deterministic function of the parameters.
struct ContrastiveBatch {
  Objective objective = Objective::kInfoGraph;
  std::vector<GraphInput> graphs;             // InfoGraph
  std::vector<std::array<ViewInput, 2>> pairs; // GraphCL / BGRL
  std::size_t augmentations = 0;
};

ContrastiveBatch make_batch(Objective objective, std::span<const TrainingGraph> graphs,
                            std::span<const std::size_t> members, const AugmentConfig& augment,
                            Rng& rng);

struct BatchEvaluation {
  double loss = 0.0;
  EncoderParams grad;
  std::size_t negative_pairs = 0;
  std::size_t views_encoded = 0;
  std::uint64_t activation_pattern = 0;
};

BatchEvaluation evaluate_batch(const EncoderParams& params, const ContrastiveBatch& batch,
                               double temperature);

/// Loss and gradient over the flattened trainable parameters, for grad_check.
GradEvaluator make_batch_evaluator(const EncoderParams& params, ContrastiveBatch batch,
                                   double temperature);

struct TrainCounters {
  std::size_t augmentations = 0;
  std::size_t negative_pairs = 0;
  std::size_t views_encoded = 0;
  std::size_t graphs_seen = 0;
  std::size_t optimizer_steps = 0;
  std::size_t ema_updates = 0;
};

struct EpochReport {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
};

struct TrainResult {
  EncoderParams params;
  std::vector<double> epoch_losses;
  TrainCounters counters;
};

TrainResult train(std::span<const TrainingGraph> graphs, const TrainConfig& config,
                  const std::function<void(const EpochReport&)>& on_epoch = {});

}  // namespace mathgcl
