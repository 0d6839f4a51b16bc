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

#include "mathgcl/retrieval_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mathgcl/binary_io.hpp"
#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

constexpr std::uint32_t kIndexVersion = 1;

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

EmbeddingIndex EmbeddingIndex::build(const std::vector<FormulaEmbedding>& embeddings,
                                     std::uint64_t config_hash) {
  if (embeddings.empty()) throw Error(ErrorCode::kEmptyCorpus, "no embeddings to index");
  EmbeddingIndex idx;
  idx.dim_ = embeddings.front().vector.size();
  idx.layout_ = embeddings.front().layout;
  idx.provenance_ = embeddings.front().provenance;
  idx.config_hash_ = config_hash;
  idx.ids_.reserve(embeddings.size());
  idx.rows_.reserve(embeddings.size() * idx.dim_);
  for (const FormulaEmbedding& e : embeddings) {
    if (e.vector.size() != idx.dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding '" + e.id + "' has length " + std::to_string(e.vector.size()));
    }
    if (e.layout != idx.layout_ || e.provenance != idx.provenance_) {
      throw Error(ErrorCode::kArtifactMismatch, "embedding '" + e.id + "' has a different layout or provenance");
    }
    if (!idx.positions_.emplace(e.id, idx.ids_.size()).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + e.id + "'");
    }
    const double norm = l2_norm(e.vector);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::kZeroVector, "embedding '" + e.id + "' has zero or non-finite norm");
    }
    idx.ids_.push_back(e.id);
    for (double x : e.vector) idx.rows_.push_back(static_cast<float>(x / norm));
  }
  idx.compute_row_norms();
  return idx;
}

std::span<const float> EmbeddingIndex::row(std::size_t i) const {
  return std::span<const float>(rows_).subspan(i * dim_, dim_);
}

std::optional<std::size_t> EmbeddingIndex::find(const std::string& id) const {
  auto it = positions_.find(id);
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingIndex::index_ids() {
  positions_.clear();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!positions_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + ids_[i] + "'");
    }
  }
}

void EmbeddingIndex::compute_row_norms() {
  row_norms_.assign(ids_.size(), 0.0);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    double s = 0.0;
    for (float x : row(i)) s += static_cast<double>(x) * x;
    row_norms_[i] = std::sqrt(s);
    if (!(row_norms_[i] > 0.0) || !std::isfinite(row_norms_[i])) {
      throw Error(ErrorCode::kMalformedRecord, "index row '" + ids_[i] + "' has zero or non-finite norm");
    }
  }
}

void EmbeddingIndex::save(const std::filesystem::path& path) const {
  BinaryWriter w(path);
  w.magic("MGRI");
  w.u32(kIndexVersion);
  w.u64(ids_.size());
  w.u32(static_cast<std::uint32_t>(dim_));
  w.string(layout_name(layout_));
  w.string(provenance_name(provenance_));
  w.u64(config_hash_);
  for (const std::string& id : ids_) w.string(id);
  w.f32s(rows_);
  w.finish();
}

EmbeddingIndex EmbeddingIndex::load(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("MGRI");
  const std::uint32_t version = r.u32();
  if (version != kIndexVersion) {
    throw Error(ErrorCode::kMalformedRecord, "unsupported index version " + std::to_string(version));
  }
  EmbeddingIndex idx;
  const std::uint64_t count = r.u64();
  idx.dim_ = r.u32();
  idx.layout_ = parse_layout(r.string());
  idx.provenance_ = parse_provenance(r.string());
  idx.config_hash_ = r.u64();
  if (count == 0 || idx.dim_ == 0) throw Error(ErrorCode::kMalformedRecord, "index is empty");
  idx.ids_.resize(count);
  for (auto& id : idx.ids_) id = r.string();
  idx.rows_.resize(count * idx.dim_);
  r.f32s(idx.rows_);
  idx.index_ids();
  idx.compute_row_norms();
  return idx;
}

RankedList query_topk(const EmbeddingIndex& index, std::span<const double> query, std::size_t k,
                      std::string query_id) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (query.size() != index.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "query length " + std::to_string(query.size()) +
                                                   " != index dim " + std::to_string(index.dim()));
  }
  const double norm = l2_norm(query);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kZeroQueryVector, "query vector has zero or non-finite norm");
  }
  // The query is quantized exactly like the stored rows.
  std::vector<float> q(query.size());
  double q_norm = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    q[j] = static_cast<float>(query[j] / norm);
    q_norm += static_cast<double>(q[j]) * q[j];
  }
  q_norm = std::sqrt(q_norm);
  const std::size_t n = index.size();
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = index.row(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) dot += static_cast<double>(row[j]) * q[j];
    scores[i] = std::clamp(dot / (q_norm * index.row_norm(i)), -1.0, 1.0);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& ids = index.ids();
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  };
  const std::size_t take = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);

  RankedList out;
  out.query_id = std::move(query_id);
  out.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.items.push_back(ScoredId{ids[order[i]], scores[order[i]]});
  return out;
}

}  // namespace mathgcl
