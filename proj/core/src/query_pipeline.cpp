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

#include "mathgcl/query_pipeline.hpp"

#include "mathgcl/error.hpp"
#include "mathgcl/graph_builders.hpp"
#include "mathgcl/latex_parser.hpp"

namespace mathgcl {
namespace {

template <typename F>
auto in_stage(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

void check_hash(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b != 0 && a != b) {
    throw Error(ErrorCode::kArtifactMismatch,
                std::string(what) + " were produced by different configurations");
  }
}

}  // namespace

QueryArtifacts make_query_artifacts(EmbeddingTable table, std::optional<EncoderParams> encoder,
                                    EmbeddingIndex index, std::optional<Layout> checkpoint_layout,
                                    std::uint64_t table_hash, std::uint64_t checkpoint_hash) {
  const bool baseline = index.provenance() == Provenance::kAverageBaseline;
  if (baseline == encoder.has_value()) {
    throw Error(ErrorCode::kArtifactMismatch,
                baseline ? "baseline index cannot be queried with an encoder checkpoint"
                         : "GCL index requires an encoder checkpoint");
  }
  if (checkpoint_layout && *checkpoint_layout != index.layout()) {
    throw Error(ErrorCode::kArtifactMismatch,
                "checkpoint layout " + std::string(layout_name(*checkpoint_layout)) +
                    " differs from index layout " + std::string(layout_name(index.layout())));
  }
  if (table.dim() != index.dim() || (encoder && encoder->dim() != index.dim())) {
    throw Error(ErrorCode::kArtifactMismatch, "artifact dimensions differ");
  }
  check_hash(table_hash, index.config_hash(), "token table and index");
  check_hash(checkpoint_hash, index.config_hash(), "checkpoint and index");
  check_hash(table_hash, checkpoint_hash, "token table and checkpoint");
  QueryArtifacts a;
  a.layout = index.layout();
  a.config_hash = index.config_hash();
  a.table = std::move(table);
  a.encoder = std::move(encoder);
  a.index = std::move(index);
  return a;
}

QueryArtifacts load_query_artifacts(const std::filesystem::path& table,
                                    const std::filesystem::path& checkpoint,
                                    const std::filesystem::path& index) {
  return in_stage("artifacts", [&] {
    std::uint64_t table_hash = 0;
    EmbeddingTable t = EmbeddingTable::load(table, &table_hash);
    std::optional<EncoderParams> enc;
    std::optional<Layout> ckpt_layout;
    std::uint64_t ckpt_hash = 0;
    if (!checkpoint.empty()) {
      CheckpointInfo info;
      enc = load_checkpoint(checkpoint, &info);
      ckpt_layout = info.layout;
      ckpt_hash = info.config_hash;
    }
    return make_query_artifacts(std::move(t), std::move(enc), EmbeddingIndex::load(index), ckpt_layout,
                                table_hash, ckpt_hash);
  });
}

std::vector<double> embed_with(const QueryArtifacts& artifacts, const FormulaGraph& graph) {
  if (artifacts.encoder) return embed_formula(*artifacts.encoder, graph, artifacts.table).vector;
  return embed_formula_baseline(graph, artifacts.table).vector;
}

RankedList query_pipeline(const QueryArtifacts& artifacts, std::string_view latex, Layout layout,
                          std::size_t k, std::string query_id) {
  if (layout != artifacts.layout) {
    throw Error(ErrorCode::kArtifactMismatch,
                "requested layout " + std::string(layout_name(layout)) + " but index is " +
                    std::string(layout_name(artifacts.layout)))
        .with_stage("artifacts");
  }
  const ExpressionTree tree = in_stage("parse", [&] { return parse_latex(latex); });
  const FormulaGraph graph = in_stage("graph", [&] { return build_graph(tree, layout); });
  const std::vector<double> q = in_stage("embed", [&] { return embed_with(artifacts, graph); });
  return in_stage("query", [&] { return query_topk(artifacts.index, q, k, std::move(query_id)); });
}

}  // namespace mathgcl
