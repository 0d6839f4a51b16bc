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

#include "mathgcl/graph_io.hpp"

#include <fstream>

#include <json.hpp>

#include "mathgcl/error.hpp"

namespace mathgcl {

using nlohmann::json;

namespace {

std::string where(std::size_t line_number, std::string_view field) {
  std::string out;
  if (line_number > 0) out += "line " + std::to_string(line_number) + ": ";
  out += "field '" + std::string(field) + "'";
  return out;
}

[[noreturn]] void malformed(std::size_t line_number, std::string_view field,
                            const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, where(line_number, field) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<CorpusRecord> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      malformed(line_number, "<record>", e.what());
    }
    if (!j.is_object()) malformed(line_number, "<record>", "expected a JSON object");
    if (!j.contains("id") || !j["id"].is_string()) malformed(line_number, "id", "missing string");
    if (!j.contains("latex") || !j["latex"].is_string()) {
      malformed(line_number, "latex", "missing string");
    }
    out.push_back({j["id"].get<std::string>(), j["latex"].get<std::string>()});
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<CorpusRecord>& records) {
  std::ofstream out = open_output(path);
  for (const auto& r : records) {
    out << json{{"id", r.id}, {"latex", r.latex}}.dump() << '\n';
  }
}

std::string serialize_graph(const FormulaGraph& graph, std::string_view id) {
  if (auto err = graph.validation_error()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot serialize invalid graph: " + *err);
  }
  const FormulaGraph g = graph.canonical();
  json nodes = json::array();
  for (const auto& t : g.nodes) nodes.push_back(t.str());
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back(json::array({e.src, e.dst, e.rel.str()}));
  // Field order is fixed by construction (ordered_json keeps insertion order).
  nlohmann::ordered_json out;
  out["id"] = std::string(id);
  out["layout"] = std::string(layout_name(g.layout));
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  out["root"] = g.root;
  return out.dump();
}

GraphRecord deserialize_graph(std::string_view record, std::size_t line_number) {
  json j;
  try {
    j = json::parse(record);
  } catch (const json::exception& e) {
    malformed(line_number, "<record>", e.what());
  }
  if (!j.is_object()) malformed(line_number, "<record>", "expected a JSON object");

  GraphRecord out;
  if (!j.contains("id") || !j["id"].is_string()) malformed(line_number, "id", "missing string");
  out.id = j["id"].get<std::string>();

  if (!j.contains("layout") || !j["layout"].is_string()) {
    malformed(line_number, "layout", "missing string");
  }
  const std::string layout = j["layout"].get<std::string>();
  if (layout != "slt" && layout != "opt") malformed(line_number, "layout", "unknown '" + layout + "'");
  out.graph.layout = layout == "slt" ? Layout::kSlt : Layout::kOpt;

  if (!j.contains("nodes") || !j["nodes"].is_array()) {
    malformed(line_number, "nodes", "missing array");
  }
  const json& nodes = j["nodes"];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_string()) {
      malformed(line_number, "nodes[" + std::to_string(i) + "]", "expected a string");
    }
    try {
      out.graph.nodes.push_back(MathToken::parse(nodes[i].get<std::string>()));
    } catch (const Error& e) {
      malformed(line_number, "nodes[" + std::to_string(i) + "]", e.detail());
    }
  }

  if (!j.contains("edges") || !j["edges"].is_array()) {
    malformed(line_number, "edges", "missing array");
  }
  const json& edges = j["edges"];
  const std::size_t n = out.graph.nodes.size();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string field = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned() || !e[2].is_string()) {
      malformed(line_number, field, "expected [src, dst, \"REL\"]");
    }
    const auto src = e[0].get<std::size_t>();
    const auto dst = e[1].get<std::size_t>();
    if (src >= n || dst >= n) {
      malformed(line_number, field,
                "dangling node index (graph has " + std::to_string(n) + " nodes)");
    }
    Relation rel;
    try {
      rel = Relation::parse(e[2].get<std::string>());
    } catch (const Error& err) {
      malformed(line_number, field, err.detail());
    }
    out.graph.edges.push_back(Edge{src, dst, rel});
  }

  if (!j.contains("root") || !j["root"].is_number_unsigned()) {
    malformed(line_number, "root", "missing non-negative integer");
  }
  out.graph.root = j["root"].get<std::size_t>();
  if (auto err = out.graph.validation_error()) malformed(line_number, "<graph>", *err);
  return out;
}

std::vector<GraphRecord> read_graphs(const std::filesystem::path& path,
                                     std::optional<Layout> only) {
  std::ifstream in = open_input(path);
  std::vector<GraphRecord> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    GraphRecord rec = deserialize_graph(line, line_number);
    if (!only || rec.graph.layout == *only) out.push_back(std::move(rec));
  }
  return out;
}

void write_graphs(const std::filesystem::path& path, const std::vector<GraphRecord>& records) {
  std::ofstream out = open_output(path);
  for (const auto& r : records) out << serialize_graph(r.graph, r.id) << '\n';
}

}  // namespace mathgcl
