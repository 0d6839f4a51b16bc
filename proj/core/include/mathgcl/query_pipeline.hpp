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
#include <string>
#include <string_view>
#include <vector>

#include "mathgcl/embedding_table.hpp"
#include "mathgcl/formula_embedding.hpp"
#include "mathgcl/gcl_params.hpp"
#include "mathgcl/retrieval_index.hpp"

namespace mathgcl {

/// Token table, optional encoder (absent for the averaging baseline) and
/// index for one layout. Read-only after loading.
struct QueryArtifacts {
  EmbeddingTable table;
  std::optional<EncoderParams> encoder;
  EmbeddingIndex index;
  Layout layout = Layout::kSlt;
  std::uint64_t config_hash = 0;
};

/// Loads and cross-checks the artifacts. Pass an empty checkpoint path for
/// the baseline. Throws kArtifactMismatch when layout, provenance or
/// config hashes disagree.
QueryArtifacts load_query_artifacts(const std::filesystem::path& table,
                                    const std::filesystem::path& checkpoint,
                                    const std::filesystem::path& index);

QueryArtifacts make_query_artifacts(EmbeddingTable table, std::optional<EncoderParams> encoder,
                                    EmbeddingIndex index, std::optional<Layout> checkpoint_layout,
                                    std::uint64_t table_hash, std::uint64_t checkpoint_hash);

/// Embedding of a graph with whichever model the artifacts carry.
std::vector<double> embed_with(const QueryArtifacts& artifacts, const FormulaGraph& graph);

/// parse -> graph -> embed -> rank. Errors carry the stage that raised them
/// ("parse", "graph", "embed", "query"); a layout other than the index's
/// raises kArtifactMismatch at stage "artifacts".
RankedList query_pipeline(const QueryArtifacts& artifacts, std::string_view latex, Layout layout,
                          std::size_t k, std::string query_id = {});

}  // namespace mathgcl
