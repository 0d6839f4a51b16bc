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

#include "mathgcl/formula_graph.hpp"

#include <algorithm>
#include <charconv>

#include "mathgcl/error.hpp"

namespace mathgcl {

std::string_view layout_name(Layout layout) noexcept {
  return layout == Layout::kSlt ? "slt" : "opt";
}

Layout parse_layout(std::string_view name) {
  if (name == "slt" || name == "SLT") return Layout::kSlt;
  if (name == "opt" || name == "OPT") return Layout::kOpt;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown layout '" + std::string(name) + "' (expected slt|opt)");
}

namespace {

constexpr std::string_view kSltNames[kSltRelationCount] = {
    "NEXT", "SUP", "SUB", "OVER", "UNDER", "WITHIN", "PRE_SUP", "PRE_SUB", "ELEMENT"};

// Traversal rank per SLT relation kind; NEXT goes last.
constexpr int kSltRank[kSltRelationCount] = {8, 0, 1, 4, 5, 6, 2, 3, 7};

}  // namespace

std::string Relation::str() const {
  if (kind == RelationKind::kArg) return "ARG" + std::to_string(ordinal);
  return std::string(kSltNames[static_cast<std::size_t>(kind)]);
}

Relation Relation::parse(std::string_view text) {
  for (std::size_t i = 0; i < kSltRelationCount; ++i) {
    if (text == kSltNames[i]) return Relation{static_cast<RelationKind>(i), 0};
  }
  if (text.size() > 3 && text.substr(0, 3) == "ARG") {
    unsigned value = 0;
    const char* first = text.data() + 3;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc() && ptr == last && value <= 0xffffu) {
      return Relation::arg(static_cast<std::uint16_t>(value));
    }
  }
  throw Error(ErrorCode::kMalformedRecord,
              "unknown relation '" + std::string(text) + "'");
}

std::size_t relation_slot(Relation rel) noexcept {
  if (rel.kind != RelationKind::kArg) return static_cast<std::size_t>(rel.kind);
  const std::size_t ord = std::min<std::size_t>(rel.ordinal, kArgSlots - 1);
  return kSltRelationCount + ord;
}

const std::vector<Relation>& slt_relations() {
  static const std::vector<Relation> all = [] {
    std::vector<Relation> out;
    for (std::size_t i = 0; i < kSltRelationCount; ++i) {
      out.push_back(Relation{static_cast<RelationKind>(i), 0});
    }
    return out;
  }();
  return all;
}

bool relation_fits_layout(Relation rel, Layout layout) noexcept {
  return (rel.kind == RelationKind::kArg) == (layout == Layout::kOpt);
}

std::vector<std::optional<std::size_t>> FormulaGraph::parent_edges() const {
  std::vector<std::optional<std::size_t>> parent(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].dst < nodes.size()) parent[edges[e].dst] = e;
  }
  return parent;
}

std::vector<std::vector<std::size_t>> FormulaGraph::ordered_children() const {
  std::vector<std::vector<std::size_t>> children(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].src < nodes.size()) children[edges[e].src].push_back(e);
  }
  auto rank = [&](std::size_t e) -> int {
    const Relation& rel = edges[e].rel;
    if (rel.kind == RelationKind::kArg) return rel.ordinal;
    return kSltRank[static_cast<std::size_t>(rel.kind)];
  };
  for (auto& list : children) {
    std::stable_sort(list.begin(), list.end(),
                     [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
  }
  return children;
}

std::optional<std::string> FormulaGraph::validation_error() const {
  const std::size_t n = nodes.size();
  if (n == 0) return "graph has no nodes";
  if (root >= n) return "root index " + std::to_string(root) + " out of range";
  if (edges.size() != n - 1) {
    return "tree with " + std::to_string(n) + " nodes must have " +
           std::to_string(n - 1) + " edges, found " + std::to_string(edges.size());
  }
  std::vector<int> indegree(n, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    if (edge.src >= n || edge.dst >= n) {
      return "edge " + std::to_string(e) + " references a missing node";
    }
    if (!relation_fits_layout(edge.rel, layout)) {
      return "edge " + std::to_string(e) + " relation " + edge.rel.str() +
             " not allowed in " + std::string(layout_name(layout));
    }
    ++indegree[edge.dst];
  }
  if (indegree[root] != 0) return "root has an incoming edge";
  for (std::size_t i = 0; i < n; ++i) {
    if (i != root && indegree[i] != 1) {
      return "node " + std::to_string(i) + " has " + std::to_string(indegree[i]) +
             " incoming edges";
    }
  }
  // n-1 edges, in-degree 1 everywhere but the root: a tree iff all nodes
  // are reachable from the root.
  const auto children = ordered_children();
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{root};
  seen[root] = 1;
  std::size_t visited = 0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    ++visited;
    for (std::size_t e : children[v]) {
      const NodeId w = edges[e].dst;
      if (seen[w]) return "cycle through node " + std::to_string(w);
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  if (visited != n) return "graph is not connected to the root";
  if (layout == Layout::kOpt) {
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < children[v].size(); ++i) {
        if (edges[children[v][i]].rel.ordinal != i) {
          return "operand ordinals of node " + std::to_string(v) +
                 " are not contiguous from 0";
        }
      }
    }
  }
  for (const MathToken& token : nodes) {
    if (!is_valid_token_value(token.value)) return "invalid token '" + token.str() + "'";
  }
  return std::nullopt;
}

FormulaGraph FormulaGraph::canonical() const {
  const auto children = ordered_children();
  FormulaGraph out;
  out.layout = layout;
  out.nodes.reserve(nodes.size());
  out.edges.reserve(edges.size());
  out.root = 0;

  // Iterative pre-order; each stack entry carries (old node, incoming edge).
  struct Frame {
    NodeId node;
    std::optional<std::size_t> via;
    NodeId new_parent;
  };
  std::vector<Frame> stack{{root, std::nullopt, 0}};
  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();
    const NodeId id = out.nodes.size();
    out.nodes.push_back(nodes[frame.node]);
    if (frame.via) out.edges.push_back(Edge{frame.new_parent, id, edges[*frame.via].rel});
    const auto& kids = children[frame.node];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      stack.push_back(Frame{edges[*it].dst, *it, id});
    }
  }
  return out;
}

}  // namespace mathgcl
