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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mathgcl/formula_embedding.hpp"

namespace mathgcl {

inline constexpr std::size_t kEvalDepth = 1000;
inline constexpr std::size_t kServeDepth = 10;

struct ScoredId {
  std::string id;
  double score = 0.0;
};

/// Ordered by score descending, then id ascending.
struct RankedList {
  std::string query_id;
  std::vector<ScoredId> items;
};

/// Unit-normalized float rows addressed by formula id. Immutable once
/// built; safe for concurrent queries.
class EmbeddingIndex {
 public:
  /// Throws kEmptyCorpus, kDuplicateId, kZeroVector or kDimensionMismatch.
  static EmbeddingIndex build(const std::vector<FormulaEmbedding>& embeddings,
                              std::uint64_t config_hash = 0);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  Layout layout() const noexcept { return layout_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::uint64_t config_hash() const noexcept { return config_hash_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t i) const;
  /// Euclidean norm of the stored float row, accumulated in double.
  double row_norm(std::size_t i) const { return row_norms_[i]; }
  std::optional<std::size_t> find(const std::string& id) const;

  void save(const std::filesystem::path& path) const;
  static EmbeddingIndex load(const std::filesystem::path& path);

  friend bool operator==(const EmbeddingIndex& a, const EmbeddingIndex& b) {
    return a.dim_ == b.dim_ && a.layout_ == b.layout_ && a.provenance_ == b.provenance_ &&
           a.config_hash_ == b.config_hash_ && a.ids_ == b.ids_ && a.rows_ == b.rows_;
  }

 private:
  void index_ids();
  void compute_row_norms();

  std::size_t dim_ = 0;
  Layout layout_ = Layout::kSlt;
  Provenance provenance_ = Provenance::kGcl;
  std::uint64_t config_hash_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> rows_;
  std::vector<double> row_norms_;
  std::unordered_map<std::string, std::size_t> positions_;
};

/// Exact cosine top-k; k is capped at the corpus size.
/// Throws kZeroQueryVector, kDimensionMismatch or kInvalidArgument (k = 0).
RankedList query_topk(const EmbeddingIndex& index, std::span<const double> query, std::size_t k,
                      std::string query_id = {});

}  // namespace mathgcl
