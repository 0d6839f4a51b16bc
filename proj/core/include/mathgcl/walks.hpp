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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mathgcl/formula_graph.hpp"

namespace mathgcl {

inline constexpr std::string_view kRelationTokenPrefix = "REL!";

/// "REL!NEXT", "REL!ARG0", ...
std::string relation_token(Relation rel);
bool is_relation_token(std::string_view token) noexcept;

/// Random-walk token sequences. Node tokens ("V!a") and relation tokens
/// ("REL!SUP") alternate, so a walk of L nodes has at most 2L-1 tokens.
struct WalkCorpus {
  std::vector<std::vector<std::string>> sequences;
  std::size_t walk_length = 0;
  std::size_t walks_per_node = 0;
  std::uint64_t seed = 0;

  std::size_t token_count() const noexcept;
};

/// walks_per_node walks from every node (node-major order), each visiting
/// up to walk_length nodes. Edges are traversed in both directions and
/// the next node is drawn uniformly among neighbours.
WalkCorpus sample_walks(const FormulaGraph& graph, std::size_t walks_per_node,
                        std::size_t walk_length, std::uint64_t seed);

/// Walks over a whole corpus; graph i uses a sub-seed derived from (seed, i).
WalkCorpus sample_corpus_walks(std::span<const FormulaGraph> graphs, std::size_t walks_per_node,
                               std::size_t walk_length, std::uint64_t seed);

}  // namespace mathgcl
