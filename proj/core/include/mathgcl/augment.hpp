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

#include <cstdint>
#include <vector>

#include "mathgcl/formula_graph.hpp"

namespace mathgcl {

/// An augmented copy of a graph. origin[i] is the index in the base graph
/// of node i, which is how two views of one graph are matched up.
struct AugmentedView {
  FormulaGraph graph;
  std::vector<NodeId> origin;
};

AugmentedView identity_view(const FormulaGraph& graph);

/// Removes exactly floor(ratio * |nodes|) non-root nodes chosen uniformly.
/// Children of a removed node move to its nearest surviving ancestor and
/// keep their relation labels (OPT operands are spliced into the removed
/// node's operand slot and renumbered). ratio must lie in [0, 1).
AugmentedView drop_nodes(const AugmentedView& view, double ratio, std::uint64_t seed);
AugmentedView drop_nodes(const FormulaGraph& graph, double ratio, std::uint64_t seed);

/// Rewires exactly floor(ratio * |edges|) distinct edges chosen uniformly:
/// the destination subtree moves under a uniformly chosen node outside it
/// (other than its current parent when possible) and the relation is
/// redrawn from the layout's alphabet (OPT: a uniform operand slot).
AugmentedView perturb_edges(const AugmentedView& view, double ratio, std::uint64_t seed);
AugmentedView perturb_edges(const FormulaGraph& graph, double ratio, std::uint64_t seed);

}  // namespace mathgcl
