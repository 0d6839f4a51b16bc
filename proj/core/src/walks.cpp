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

#include "mathgcl/walks.hpp"

#include "mathgcl/error.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {

std::string relation_token(Relation rel) {
  return std::string(kRelationTokenPrefix) + rel.str();
}

bool is_relation_token(std::string_view token) noexcept {
  return token.substr(0, kRelationTokenPrefix.size()) == kRelationTokenPrefix;
}

std::size_t WalkCorpus::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.size();
  return n;
}

namespace {

void append_walks(const FormulaGraph& graph, std::size_t walks_per_node, std::size_t walk_length,
                  Rng& rng, std::vector<std::vector<std::string>>& out) {
  struct Step {
    NodeId to;
    std::size_t edge;
  };
  std::vector<std::vector<Step>> adjacency(graph.node_count());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    adjacency[graph.edges[e].src].push_back({graph.edges[e].dst, e});
    adjacency[graph.edges[e].dst].push_back({graph.edges[e].src, e});
  }
  std::vector<std::string> node_tokens;
  node_tokens.reserve(graph.node_count());
  for (const auto& t : graph.nodes) node_tokens.push_back(t.str());

  for (NodeId start = 0; start < graph.node_count(); ++start) {
    for (std::size_t w = 0; w < walks_per_node; ++w) {
      std::vector<std::string> seq;
      seq.reserve(2 * walk_length - 1);
      NodeId at = start;
      seq.push_back(node_tokens[at]);
      for (std::size_t step = 1; step < walk_length; ++step) {
        const auto& nbrs = adjacency[at];
        if (nbrs.empty()) break;
        const Step& next = nbrs[rng.uniform_index(nbrs.size())];
        seq.push_back(relation_token(graph.edges[next.edge].rel));
        at = next.to;
        seq.push_back(node_tokens[at]);
      }
      out.push_back(std::move(seq));
    }
  }
}

void check_params(std::size_t walks_per_node, std::size_t walk_length) {
  if (walks_per_node < 1 || walk_length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "walks per node and walk length must be >= 1");
  }
}

}  // namespace

WalkCorpus sample_walks(const FormulaGraph& graph, std::size_t walks_per_node,
                        std::size_t walk_length, std::uint64_t seed) {
  check_params(walks_per_node, walk_length);
  WalkCorpus corpus{{}, walk_length, walks_per_node, seed};
  Rng rng(seed);
  append_walks(graph, walks_per_node, walk_length, rng, corpus.sequences);
  return corpus;
}

WalkCorpus sample_corpus_walks(std::span<const FormulaGraph> graphs, std::size_t walks_per_node,
                               std::size_t walk_length, std::uint64_t seed) {
  check_params(walks_per_node, walk_length);
  WalkCorpus corpus{{}, walk_length, walks_per_node, seed};
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    append_walks(graphs[i], walks_per_node, walk_length, rng, corpus.sequences);
  }
  return corpus;
}

}  // namespace mathgcl
