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
#include <span>
#include <utility>
#include <vector>

#include "mathgcl/encoder.hpp"

namespace mathgcl {

double softplus(double x) noexcept;

struct InfoGraphResult {
  double loss = 0.0;
  std::vector<Matrix> d_nodes;  // one per graph
  Matrix d_graphs;              // B x dim
  Matrix d_discriminator;
  std::size_t negative_pairs = 0;
};

/// Jensen-Shannon node/graph contrast with bilinear critic h^T M z.
/// Throws kBatchTooSmall for fewer than two graphs.
InfoGraphResult infograph_loss(std::span<const Matrix> nodes, const Matrix& graphs,
                               const Matrix& discriminator);

struct GraphClResult {
  double loss = 0.0;
  std::vector<double> anchor_losses;  // 2N entries
  Matrix d_views;                     // 2N x dim
  std::size_t negative_pairs = 0;
};

/// NT-Xent over 2N views; rows 2i and 2i+1 are the two views of graph i.
/// Throws kBatchTooSmall for N < 2 and kInvalidArgument for tau <= 0.
GraphClResult graphcl_loss(const Matrix& views, double tau);

using NodePairs = std::vector<std::pair<std::size_t, std::size_t>>;

/// Pairs (row in view a, row in view b) whose origins coincide.
NodePairs shared_nodes(std::span<const std::size_t> origin_a, std::span<const std::size_t> origin_b);

struct BgrlResult {
  double loss = 0.0;
  Matrix d_pred_a;  // gradient w.r.t. online predictions of view a
  Matrix d_pred_b;
};

/// [2 - 2 mean cos(pred_a, target_b)] + [2 - 2 mean cos(pred_b, target_a)]
/// over the shared rows. Targets receive no gradient.
/// Throws kNoSharedNodes when `shared` is empty.
BgrlResult bgrl_loss(const Matrix& pred_a, const Matrix& target_b, const Matrix& pred_b,
                     const Matrix& target_a, const NodePairs& shared);

}  // namespace mathgcl
