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

#include "mathgcl/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

constexpr double kNormEps = 1e-12;

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Adds to row `r` of grad_x the gradient of scale * cos(x_r, y_s) w.r.t. x_r.
double cosine_with_grad(const Matrix& x, Eigen::Index r, const Matrix& y, Eigen::Index s,
                        double scale, Matrix& grad_x) {
  const double nx = std::max(x.row(r).norm(), kNormEps);
  const double ny = std::max(y.row(s).norm(), kNormEps);
  const double c = x.row(r).dot(y.row(s)) / (nx * ny);
  grad_x.row(r) += scale * (y.row(s) / (nx * ny) - c * x.row(r) / (nx * nx));
  return c;
}

}  // namespace

double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

InfoGraphResult infograph_loss(std::span<const Matrix> nodes, const Matrix& graphs,
                               const Matrix& discriminator) {
  const std::size_t b = nodes.size();
  if (b < 2) throw Error(ErrorCode::kBatchTooSmall, "InfoGraph needs at least 2 graphs per batch");
  if (static_cast<std::size_t>(graphs.rows()) != b) {
    throw Error(ErrorCode::kDimensionMismatch, "graph embedding rows differ from batch size");
  }
  Eigen::Index total = 0;
  for (const Matrix& h : nodes) total += h.rows();
  const Eigen::Index dim = graphs.cols();
  Matrix all(total, dim);
  std::vector<std::size_t> owner(static_cast<std::size_t>(total));
  Eigen::Index row = 0;
  for (std::size_t g = 0; g < b; ++g) {
    all.middleRows(row, nodes[g].rows()) = nodes[g];
    for (Eigen::Index i = 0; i < nodes[g].rows(); ++i) owner[static_cast<std::size_t>(row + i)] = g;
    row += nodes[g].rows();
  }

  const Matrix scores = all * discriminator * graphs.transpose();  // total x B
  const double n_pos = static_cast<double>(total);
  const double n_neg = static_cast<double>(total) * static_cast<double>(b - 1);
  double pos = 0.0, neg = 0.0;
  Matrix d_scores(total, static_cast<Eigen::Index>(b));
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index g = 0; g < static_cast<Eigen::Index>(b); ++g) {
      const double s = scores(i, g);
      if (owner[static_cast<std::size_t>(i)] == static_cast<std::size_t>(g)) {
        pos += softplus(-s);
        d_scores(i, g) = -sigmoid(-s) / n_pos;
      } else {
        neg += softplus(s);
        d_scores(i, g) = sigmoid(s) / n_neg;
      }
    }
  }

  InfoGraphResult r;
  r.loss = pos / n_pos + neg / n_neg;
  r.negative_pairs = static_cast<std::size_t>(n_neg);
  const Matrix d_all = d_scores * graphs * discriminator.transpose();
  r.d_graphs = d_scores.transpose() * all * discriminator;
  r.d_discriminator = all.transpose() * d_scores * graphs;
  row = 0;
  for (std::size_t g = 0; g < b; ++g) {
    r.d_nodes.push_back(d_all.middleRows(row, nodes[g].rows()));
    row += nodes[g].rows();
  }
  return r;
}

GraphClResult graphcl_loss(const Matrix& views, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  const Eigen::Index m = views.rows();
  if (m % 2 != 0) throw Error(ErrorCode::kDimensionMismatch, "GraphCL expects two views per graph");
  if (m < 4) throw Error(ErrorCode::kBatchTooSmall, "GraphCL needs at least 2 graphs per batch");

  Eigen::VectorXd norms(m);
  Matrix u(m, views.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    norms(i) = std::max(views.row(i).norm(), kNormEps);
    u.row(i) = views.row(i) / norms(i);
  }
  const Matrix sim = u * u.transpose() / tau;

  GraphClResult r;
  r.anchor_losses.resize(static_cast<std::size_t>(m));
  Matrix d_sim = Matrix::Zero(m, m);
  const double inv = 1.0 / static_cast<double>(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index p = i ^ 1;
    double mx = -INFINITY;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k != i) mx = std::max(mx, sim(i, k));
    }
    double z = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k != i) z += std::exp(sim(i, k) - mx);
    }
    const double lse = mx + std::log(z);
    r.anchor_losses[static_cast<std::size_t>(i)] = lse - sim(i, p);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == i) continue;
      d_sim(i, k) = (std::exp(sim(i, k) - lse) - (k == p ? 1.0 : 0.0)) * inv;
    }
  }
  double sum = 0.0;
  for (double l : r.anchor_losses) sum += l;
  r.loss = sum * inv;
  r.negative_pairs = static_cast<std::size_t>(m) * static_cast<std::size_t>(m - 2);

  const Matrix d_u = (d_sim + d_sim.transpose()) * u / tau;
  r.d_views.resize(m, views.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    const double proj = u.row(i).dot(d_u.row(i));
    r.d_views.row(i) = (d_u.row(i) - proj * u.row(i)) / norms(i);
  }
  return r;
}

NodePairs shared_nodes(std::span<const std::size_t> origin_a, std::span<const std::size_t> origin_b) {
  std::map<std::size_t, std::size_t> in_b;
  for (std::size_t j = 0; j < origin_b.size(); ++j) in_b.emplace(origin_b[j], j);
  NodePairs out;
  for (std::size_t i = 0; i < origin_a.size(); ++i) {
    if (auto it = in_b.find(origin_a[i]); it != in_b.end()) out.emplace_back(i, it->second);
  }
  return out;
}

BgrlResult bgrl_loss(const Matrix& pred_a, const Matrix& target_b, const Matrix& pred_b,
                     const Matrix& target_a, const NodePairs& shared) {
  if (shared.empty()) throw Error(ErrorCode::kNoSharedNodes, "augmented views share no nodes");
  BgrlResult r;
  r.d_pred_a = Matrix::Zero(pred_a.rows(), pred_a.cols());
  r.d_pred_b = Matrix::Zero(pred_b.rows(), pred_b.cols());
  const double scale = -2.0 / static_cast<double>(shared.size());
  double cos_ab = 0.0, cos_ba = 0.0;
  for (const auto& [ia, ib] : shared) {
    const auto a = static_cast<Eigen::Index>(ia);
    const auto b = static_cast<Eigen::Index>(ib);
    cos_ab += cosine_with_grad(pred_a, a, target_b, b, scale, r.d_pred_a);
    cos_ba += cosine_with_grad(pred_b, b, target_a, a, scale, r.d_pred_b);
  }
  const double n = static_cast<double>(shared.size());
  r.loss = (2.0 - 2.0 * cos_ab / n) + (2.0 - 2.0 * cos_ba / n);
  return r;
}

}  // namespace mathgcl
