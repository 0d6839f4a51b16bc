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

#include "mathgcl/encoder.hpp"

#include <cmath>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

Matrix glorot(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
  }
  return m;
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_grad(const Matrix& upstream, const Matrix& pre) {
  return upstream.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
}

void add_bias(Matrix& rows, const Matrix& bias) {
  rows.rowwise() += bias.col(0).transpose();
}

}  // namespace

EncoderWeights EncoderWeights::zeros(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return EncoderWeights{Matrix::Zero(d, d), Matrix::Zero(d, 1), Matrix::Zero(d, d),
                        Matrix::Zero(d, 1),
                        Matrix::Zero(static_cast<Eigen::Index>(kRelationSlotCount), d)};
}

EncoderWeights EncoderWeights::random(std::size_t dim, Rng& rng) {
  EncoderWeights w = zeros(dim);
  w.w1 = glorot(dim, dim, rng);
  w.w2 = glorot(dim, dim, rng);
  for (Eigen::Index c = 0; c < w.relations.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.relations.rows(); ++r) w.relations(r, c) = rng.uniform(-0.1, 0.1);
  }
  return w;
}

Mlp Mlp::zeros(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return Mlp{Matrix::Zero(d, d), Matrix::Zero(d, 1), Matrix::Zero(d, d), Matrix::Zero(d, 1)};
}

Mlp Mlp::random(std::size_t dim, Rng& rng) {
  Mlp m = zeros(dim);
  m.w1 = glorot(dim, dim, rng);
  m.w2 = glorot(dim, dim, rng);
  return m;
}

GraphInput make_graph_input(const FormulaGraph& graph, const Matrix& features) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (n == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no nodes");
  if (features.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature rows " + std::to_string(features.rows()) + " != node count " +
                    std::to_string(n));
  }
  GraphInput in;
  in.features = features;
  in.propagate = Matrix::Identity(n, n);
  in.relation_counts = Matrix::Zero(n, static_cast<Eigen::Index>(kRelationSlotCount));
  for (const Edge& e : graph.edges) {
    const auto s = static_cast<Eigen::Index>(e.src);
    const auto d = static_cast<Eigen::Index>(e.dst);
    const auto slot = static_cast<Eigen::Index>(relation_slot(e.rel));
    in.propagate(s, d) += 1.0;
    in.propagate(d, s) += 1.0;
    in.relation_counts(s, slot) += 1.0;
    in.relation_counts(d, slot) += 1.0;
  }
  return in;
}

Matrix node_features(const FormulaGraph& graph, const EmbeddingTable& table) {
  Matrix x(static_cast<Eigen::Index>(graph.node_count()), static_cast<Eigen::Index>(table.dim()));
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto v = embed_token(table, graph.nodes[i].str());
    for (std::size_t k = 0; k < v.size(); ++k) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[k];
    }
  }
  return x;
}

EncoderCache encode_forward(const EncoderWeights& w, const GraphInput& input) {
  if (input.features.cols() != w.w1.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature width " + std::to_string(input.features.cols()) + " != encoder width " +
                    std::to_string(w.w1.cols()));
  }
  EncoderCache c;
  const Matrix rel_msg = input.relation_counts * w.relations;
  c.m1 = input.propagate * input.features + rel_msg;
  c.pre1 = c.m1 * w.w1.transpose();
  add_bias(c.pre1, w.b1);
  c.h1 = relu(c.pre1);
  c.m2 = input.propagate * c.h1 + rel_msg;
  c.pre2 = c.m2 * w.w2.transpose();
  add_bias(c.pre2, w.b2);
  c.h2 = relu(c.pre2);
  c.z = c.h2.colwise().mean().transpose();
  return c;
}

void encode_backward(const EncoderWeights& w, const GraphInput& input, const EncoderCache& cache,
                     const Matrix& d_nodes, const Eigen::VectorXd& d_graph, EncoderWeights& grad) {
  const double n = static_cast<double>(input.node_count());
  Matrix d_h2 = d_nodes;
  d_h2.rowwise() += (d_graph / n).transpose();

  const Matrix d_pre2 = relu_grad(d_h2, cache.pre2);
  grad.w2.noalias() += d_pre2.transpose() * cache.m2;
  grad.b2 += d_pre2.colwise().sum().transpose();
  const Matrix d_m2 = d_pre2 * w.w2;
  grad.relations.noalias() += input.relation_counts.transpose() * d_m2;
  const Matrix d_h1 = input.propagate.transpose() * d_m2;

  const Matrix d_pre1 = relu_grad(d_h1, cache.pre1);
  grad.w1.noalias() += d_pre1.transpose() * cache.m1;
  grad.b1 += d_pre1.colwise().sum().transpose();
  const Matrix d_m1 = d_pre1 * w.w1;
  grad.relations.noalias() += input.relation_counts.transpose() * d_m1;
}

Encoding encode(const EncoderWeights& w, const FormulaGraph& graph, const Matrix& features) {
  const GraphInput input = make_graph_input(graph, features);
  EncoderCache c = encode_forward(w, input);
  return Encoding{std::move(c.h2), std::move(c.z)};
}

MlpCache mlp_forward(const Mlp& mlp, const Matrix& rows) {
  MlpCache c;
  c.input = rows;
  c.pre = rows * mlp.w1.transpose();
  add_bias(c.pre, mlp.b1);
  c.hidden = relu(c.pre);
  c.output = c.hidden * mlp.w2.transpose();
  add_bias(c.output, mlp.b2);
  return c;
}

Matrix mlp_backward(const Mlp& mlp, const MlpCache& cache, const Matrix& d_output, Mlp& grad) {
  grad.w2.noalias() += d_output.transpose() * cache.hidden;
  grad.b2 += d_output.colwise().sum().transpose();
  const Matrix d_pre = relu_grad(d_output * mlp.w2, cache.pre);
  grad.w1.noalias() += d_pre.transpose() * cache.input;
  grad.b1 += d_pre.colwise().sum().transpose();
  return d_pre * mlp.w1;
}

std::uint64_t hash_activation_mask(std::uint64_t seed, const Matrix& pre_activation) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index c = 0; c < pre_activation.cols(); ++c) {
    for (Eigen::Index r = 0; r < pre_activation.rows(); ++r) {
      h = (h ^ (pre_activation(r, c) > 0.0 ? 0x2dULL : 0x35ULL)) * 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace mathgcl
