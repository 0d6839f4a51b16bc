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

#include "mathgcl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mathgcl/error.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {
namespace {

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "augmentation ratio must lie in [0, 1)");
  }
}

std::size_t count_for(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
}

// Mutable child-list form of a tree; rebuilt into a FormulaGraph at the end.
struct TreeEdit {
  Layout layout;
  std::vector<std::vector<NodeId>> children;
  std::vector<std::optional<NodeId>> parent;
  std::vector<Relation> rel;  // label of each node's incoming edge

  explicit TreeEdit(const FormulaGraph& g)
      : layout(g.layout), children(g.node_count()), parent(g.node_count()), rel(g.node_count()) {
    const auto ordered = g.ordered_children();
    for (NodeId v = 0; v < g.node_count(); ++v) {
      for (std::size_t e : ordered[v]) {
        const NodeId c = g.edges[e].dst;
        children[v].push_back(c);
        parent[c] = v;
        rel[c] = g.edges[e].rel;
      }
    }
  }

  void renumber(NodeId v) {
    if (layout != Layout::kOpt) return;
    for (std::size_t i = 0; i < children[v].size(); ++i) {
      rel[children[v][i]] = Relation::arg(static_cast<std::uint16_t>(i));
    }
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (NodeId v = 0; v < children.size(); ++v) {
      for (NodeId c : children[v]) out.push_back(Edge{v, c, rel[c]});
    }
    return out;
  }
};

}  // namespace

AugmentedView identity_view(const FormulaGraph& graph) {
  AugmentedView v{graph, std::vector<NodeId>(graph.node_count())};
  for (NodeId i = 0; i < graph.node_count(); ++i) v.origin[i] = i;
  return v;
}

AugmentedView drop_nodes(const AugmentedView& view, double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  const FormulaGraph& g = view.graph;
  const std::size_t n = g.node_count();
  const std::size_t k = count_for(ratio, n);
  if (k == 0) return view;

  std::vector<NodeId> candidates;
  for (NodeId i = 0; i < n; ++i) {
    if (i != g.root) candidates.push_back(i);
  }
  Rng rng(seed);
  std::vector<char> dropped(n, 0);
  for (std::size_t pick : rng.sample_without_replacement(candidates.size(), k)) {
    dropped[candidates[pick]] = 1;
  }

  const TreeEdit tree(g);
  // Surviving children of v, with dropped nodes replaced by their own
  // surviving children, in order.
  std::vector<std::vector<NodeId>> kept(n);
  auto expand = [&](auto&& self, NodeId v, std::vector<NodeId>& out) -> void {
    for (NodeId c : tree.children[v]) {
      if (dropped[c]) {
        self(self, c, out);
      } else {
        out.push_back(c);
      }
    }
  };
  for (NodeId v = 0; v < n; ++v) {
    if (!dropped[v]) expand(expand, v, kept[v]);
  }

  std::vector<NodeId> remap(n, 0);
  AugmentedView out;
  out.graph.layout = g.layout;
  for (NodeId v = 0; v < n; ++v) {
    if (dropped[v]) continue;
    remap[v] = out.graph.nodes.size();
    out.graph.nodes.push_back(g.nodes[v]);
    out.origin.push_back(view.origin[v]);
  }
  out.graph.root = remap[g.root];
  for (NodeId v = 0; v < n; ++v) {
    if (dropped[v]) continue;
    for (std::size_t i = 0; i < kept[v].size(); ++i) {
      const NodeId c = kept[v][i];
      Relation rel = tree.rel[c];
      if (g.layout == Layout::kOpt) rel = Relation::arg(static_cast<std::uint16_t>(i));
      out.graph.edges.push_back(Edge{remap[v], remap[c], rel});
    }
  }
  return out;
}

AugmentedView drop_nodes(const FormulaGraph& graph, double ratio, std::uint64_t seed) {
  return drop_nodes(identity_view(graph), ratio, seed);
}

AugmentedView perturb_edges(const AugmentedView& view, double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  const FormulaGraph& g = view.graph;
  const std::size_t k = count_for(ratio, g.edge_count());
  if (k == 0) return view;

  Rng rng(seed);
  TreeEdit tree(g);
  const std::size_t n = g.node_count();
  std::vector<NodeId> targets;
  for (std::size_t e : rng.sample_without_replacement(g.edge_count(), k)) {
    targets.push_back(g.edges[e].dst);
  }

  std::vector<char> in_subtree(n);
  for (NodeId d : targets) {
    std::fill(in_subtree.begin(), in_subtree.end(), 0);
    std::vector<NodeId> stack{d};
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      in_subtree[v] = 1;
      for (NodeId c : tree.children[v]) stack.push_back(c);
    }
    const NodeId old_parent = *tree.parent[d];
    std::vector<NodeId> candidates;
    for (NodeId v = 0; v < n; ++v) {
      if (!in_subtree[v] && v != old_parent) candidates.push_back(v);
    }
    const NodeId new_parent =
        candidates.empty() ? old_parent : candidates[rng.uniform_index(candidates.size())];

    auto& old_list = tree.children[old_parent];
    const auto old_pos = static_cast<std::size_t>(
        std::find(old_list.begin(), old_list.end(), d) - old_list.begin());
    old_list.erase(old_list.begin() + static_cast<std::ptrdiff_t>(old_pos));
    auto& new_list = tree.children[new_parent];

    if (g.layout == Layout::kSlt) {
      const auto& alphabet = slt_relations();
      Relation label = alphabet[rng.uniform_index(alphabet.size())];
      if (new_parent == old_parent && label == tree.rel[d]) {
        // Same parent: draw from the other eight labels so the edge changes.
        std::size_t pick = rng.uniform_index(alphabet.size() - 1);
        if (alphabet[pick] == tree.rel[d]) pick = alphabet.size() - 1;
        label = alphabet[pick];
      }
      new_list.push_back(d);
      tree.rel[d] = label;
    } else {
      std::size_t slot = rng.uniform_index(new_list.size() + 1);
      if (new_parent == old_parent && slot == old_pos && new_list.size() > 0) {
        slot = (slot + 1 + rng.uniform_index(new_list.size())) % (new_list.size() + 1);
      }
      new_list.insert(new_list.begin() + static_cast<std::ptrdiff_t>(slot), d);
      tree.renumber(old_parent);
      tree.renumber(new_parent);
    }
    tree.parent[d] = new_parent;
  }

  AugmentedView out{g, view.origin};
  out.graph.edges = tree.edges();
  return out;
}

AugmentedView perturb_edges(const FormulaGraph& graph, double ratio, std::uint64_t seed) {
  return perturb_edges(identity_view(graph), ratio, seed);
}

}  // namespace mathgcl
