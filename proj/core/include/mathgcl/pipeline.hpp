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
#include <vector>

#include "mathgcl/evaluation.hpp"
#include "mathgcl/formula_embedding.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/query_pipeline.hpp"
#include "mathgcl/skipgram.hpp"
#include "mathgcl/trainer.hpp"

namespace mathgcl {

inline constexpr const char* kBaselineModel = "baseline";

struct WalkConfig {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 8;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t k = kServeDepth;
  Layout layout = Layout::kSlt;
  std::string model = "graphcl";
};

/// One JSON document with a section per stage. Relative paths resolve
/// against the directory of the config file.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path qrels;  // optional
  std::filesystem::path output_dir;
  std::vector<Layout> layouts{Layout::kSlt, Layout::kOpt};
  std::vector<Objective> models{Objective::kInfoGraph, Objective::kGraphCl, Objective::kBgrl};
  bool baseline = true;
  std::uint64_t seed = 7;
  WalkConfig walks;
  SkipGramConfig skipgram;
  TrainConfig gcl;  // objective is taken from `models`
  std::size_t eval_k = kEvalDepth;
  ServeConfig serve;

  /// Throws kConfigError for unknown keys, wrong types or bad values.
  static PipelineConfig parse(const std::string& json_text,
                              const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);

  /// Stage configs with the global seed applied.
  SkipGramConfig skipgram_for_run() const;
  TrainConfig gcl_for(Objective objective) const;

  /// Canonical JSON of every setting that influences artifact bytes
  /// (paths excluded; the corpus enters through its content hash).
  std::string canonical_json() const;
  std::uint64_t hash() const;
};

/// Stage helpers shared by the CLI subcommands and the pipeline.
/// Parse errors carry stage "parse" and the offending formula id.
std::vector<GraphRecord> parse_corpus(const std::vector<CorpusRecord>& corpus, Layout layout);
EmbeddingTable train_token_table(const std::vector<GraphRecord>& graphs, const WalkConfig& walks,
                                 const SkipGramConfig& skipgram);
std::vector<FormulaEmbedding> embed_corpus(const std::vector<GraphRecord>& graphs,
                                           const EmbeddingTable& table, const EncoderParams* encoder);

struct ModelRun {
  std::string model;  // objective name or "baseline"
  std::filesystem::path checkpoint;  // empty for the baseline
  std::filesystem::path index;
  std::filesystem::path run;
  std::vector<double> loss_curve;
  TrainCounters counters;
  std::size_t self_rank1 = 0;
  double min_self_score = 1.0;
  std::optional<MetricReport> metrics;
};

struct LayoutRun {
  Layout layout = Layout::kSlt;
  std::filesystem::path graphs;
  std::filesystem::path tokens;
  std::vector<ModelRun> models;
};

struct PipelineResult {
  std::uint64_t config_hash = 0;
  std::size_t corpus_size = 0;
  std::vector<LayoutRun> layouts;
  std::filesystem::path manifest;
  std::filesystem::path smoke_report;
  std::filesystem::path eval_report;  // empty without qrels
  bool smoke_passed = false;
};

PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace mathgcl
