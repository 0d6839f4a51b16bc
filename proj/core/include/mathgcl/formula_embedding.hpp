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

#include <string>
#include <string_view>
#include <vector>

#include "mathgcl/embedding_table.hpp"
#include "mathgcl/formula_graph.hpp"
#include "mathgcl/gcl_params.hpp"

namespace mathgcl {

enum class Provenance { kGcl, kAverageBaseline };

std::string_view provenance_name(Provenance p) noexcept;  // "gcl" / "average_baseline"
Provenance parse_provenance(std::string_view name);

struct FormulaEmbedding {
  std::string id;
  std::vector<double> vector;
  Provenance provenance = Provenance::kGcl;
  Layout layout = Layout::kSlt;
};

/// Encoder readout of the online encoder. Throws kEmptyGraph.
FormulaEmbedding embed_formula(const EncoderParams& params, const FormulaGraph& graph,
                               const EmbeddingTable& table, std::string id = {});

/// Unweighted mean of the node feature vectors. Throws kEmptyGraph.
FormulaEmbedding embed_formula_baseline(const FormulaGraph& graph, const EmbeddingTable& table,
                                        std::string id = {});

/// Baseline from explicit per-node features (rows).
std::vector<double> mean_rows(const Matrix& features);

/// JSONL with fields id, provenance, layout, vector.
void write_embeddings(const std::filesystem::path& path, const std::vector<FormulaEmbedding>& items);
std::vector<FormulaEmbedding> read_embeddings(const std::filesystem::path& path);

}  // namespace mathgcl
