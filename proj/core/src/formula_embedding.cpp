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

#include "mathgcl/formula_embedding.hpp"

#include <fstream>

#include <json.hpp>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

void require_nodes(const FormulaGraph& graph) {
  if (graph.node_count() == 0) throw Error(ErrorCode::kEmptyGraph, "cannot embed a graph with no nodes");
}

}  // namespace

std::string_view provenance_name(Provenance p) noexcept {
  return p == Provenance::kGcl ? "gcl" : "average_baseline";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "gcl") return Provenance::kGcl;
  if (name == "average_baseline") return Provenance::kAverageBaseline;
  throw Error(ErrorCode::kInvalidArgument, "unknown provenance '" + std::string(name) + "'");
}

std::vector<double> mean_rows(const Matrix& features) {
  if (features.rows() == 0) throw Error(ErrorCode::kEmptyGraph, "cannot embed a graph with no nodes");
  const Eigen::VectorXd m = features.colwise().mean().transpose();
  return std::vector<double>(m.data(), m.data() + m.size());
}

FormulaEmbedding embed_formula(const EncoderParams& params, const FormulaGraph& graph,
                               const EmbeddingTable& table, std::string id) {
  require_nodes(graph);
  const Encoding enc = encode(params.online, graph, node_features(graph, table));
  return FormulaEmbedding{std::move(id), std::vector<double>(enc.graph.data(), enc.graph.data() + enc.graph.size()),
                          Provenance::kGcl, graph.layout};
}

FormulaEmbedding embed_formula_baseline(const FormulaGraph& graph, const EmbeddingTable& table,
                                        std::string id) {
  require_nodes(graph);
  return FormulaEmbedding{std::move(id), mean_rows(node_features(graph, table)),
                          Provenance::kAverageBaseline, graph.layout};
}

void write_embeddings(const std::filesystem::path& path, const std::vector<FormulaEmbedding>& items) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  for (const FormulaEmbedding& e : items) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["provenance"] = provenance_name(e.provenance);
    j["layout"] = layout_name(e.layout);
    j["vector"] = e.vector;
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

std::vector<FormulaEmbedding> read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::vector<FormulaEmbedding> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      FormulaEmbedding e;
      e.id = j.at("id").get<std::string>();
      e.provenance = parse_provenance(j.value("provenance", std::string("gcl")));
      e.layout = parse_layout(j.value("layout", std::string("slt")));
      e.vector = j.at("vector").get<std::vector<double>>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace mathgcl
