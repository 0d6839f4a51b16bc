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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mathgcl/formula_graph.hpp"

namespace mathgcl {

/// One line of a corpus file: {"id": "...", "latex": "..."}.
struct CorpusRecord {
  std::string id;
  std::string latex;
};

std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, const std::vector<CorpusRecord>& records);

struct GraphRecord {
  std::string id;
  FormulaGraph graph;
};

/// Single-line JSON: {"id","layout","nodes":[...],"edges":[[s,d,"REL"],...],"root"}.
/// Nodes are written in canonical pre-order, so equal trees give equal text.
std::string serialize_graph(const FormulaGraph& graph, std::string_view id);

/// Inverse of serialize_graph. Throws Error(kMalformedRecord) naming the
/// line (when line_number > 0) and the offending field.
GraphRecord deserialize_graph(std::string_view record, std::size_t line_number = 0);

std::vector<GraphRecord> read_graphs(const std::filesystem::path& path,
                                     std::optional<Layout> only = std::nullopt);
void write_graphs(const std::filesystem::path& path, const std::vector<GraphRecord>& records);

}  // namespace mathgcl
