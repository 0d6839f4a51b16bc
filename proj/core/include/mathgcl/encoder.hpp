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

#include <Eigen/Dense>

#include "mathgcl/embedding_table.hpp"
#include "mathgcl/formula_graph.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {

using Matrix = Eigen::MatrixXd;

/// Two rounds of relation-aware message passing:
///   h_i <- ReLU(W (h_i + sum_{j in N(i)} (h_j + r_rel(i,j))) + b)
/// with edges treated as undirected. Biases are stored as dim x 1.
struct EncoderWeights {
  Matrix w1, b1, w2, b2;
  Matrix relations;  // kRelationSlotCount x dim

  static EncoderWeights zeros(std::size_t dim);
  static EncoderWeights random(std::size_t dim, Rng& rng);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(w1.rows()); }
};

/// Linear -> ReLU -> Linear, applied to each row.
struct Mlp {
  Matrix w1, b1, w2, b2;

  static Mlp zeros(std::size_t dim);
  static Mlp random(std::size_t dim, Rng& rng);
};

/// Per-graph constants for the encoder: node features, the (I + A)
/// propagation matrix and per-node counts of incident relation slots.
struct GraphInput {
  Matrix features;         // n x dim
  Matrix propagate;        // n x n, symmetric
  Matrix relation_counts;  // n x kRelationSlotCount
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(features.rows()); }
};

/// Throws Error(kDimensionMismatch) unless features is |nodes| x dim.
GraphInput make_graph_input(const FormulaGraph& graph, const Matrix& features);

/// Token-embedding rows for each node (relation tokens are never looked up).
Matrix node_features(const FormulaGraph& graph, const EmbeddingTable& table);

struct EncoderCache {
  Matrix m1, pre1, h1, m2, pre2, h2;
  Eigen::VectorXd z;  // mean of h2 rows
};

EncoderCache encode_forward(const EncoderWeights& w, const GraphInput& input);

/// Accumulates into `grad` the gradient given dL/dH (final node
/// embeddings) and dL/dz (graph readout).
void encode_backward(const EncoderWeights& w, const GraphInput& input, const EncoderCache& cache,
                     const Matrix& d_nodes, const Eigen::VectorXd& d_graph, EncoderWeights& grad);

struct Encoding {
  Matrix nodes;          // n x dim
  Eigen::VectorXd graph; // dim
};

Encoding encode(const EncoderWeights& w, const FormulaGraph& graph, const Matrix& features);

struct MlpCache {
  Matrix input, pre, hidden, output;
};

MlpCache mlp_forward(const Mlp& mlp, const Matrix& rows);
/// Accumulates parameter gradients into `grad`; returns dL/d(input rows).
Matrix mlp_backward(const Mlp& mlp, const MlpCache& cache, const Matrix& d_output, Mlp& grad);

/// Folds a ReLU activation mask into a running hash (used to detect when
/// a finite-difference probe crosses a kink).
std::uint64_t hash_activation_mask(std::uint64_t seed, const Matrix& pre_activation);

}  // namespace mathgcl
