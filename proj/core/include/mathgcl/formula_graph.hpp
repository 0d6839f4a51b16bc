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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mathgcl/token.hpp"

namespace mathgcl {

enum class Layout { kSlt, kOpt };

std::string_view layout_name(Layout layout) noexcept;  // "slt" / "opt"
Layout parse_layout(std::string_view name);             // throws kInvalidArgument

enum class RelationKind {
  kNext,
  kSup,
  kSub,
  kOver,
  kUnder,
  kWithin,
  kPreSup,
  kPreSub,
  kElement,
  kArg,
};

/// Edge label. SLT graphs use the nine layout kinds; OPT graphs use kArg
/// with a 0-based operand ordinal.
struct Relation {
  RelationKind kind = RelationKind::kNext;
  std::uint16_t ordinal = 0;

  static constexpr Relation arg(std::uint16_t i) { return {RelationKind::kArg, i}; }

  std::string str() const;  // "NEXT", "SUP", ..., "ARG0", "ARG1", ...
  static Relation parse(std::string_view text);  // throws kMalformedRecord

  friend bool operator==(const Relation&, const Relation&) = default;
};

inline constexpr std::size_t kSltRelationCount = 9;
/// OPT ordinals at or above this share the last relation-embedding slot.
inline constexpr std::size_t kArgSlots = 16;
inline constexpr std::size_t kRelationSlotCount = kSltRelationCount + kArgSlots;

/// Dense index of a relation for embedding lookup, in [0, kRelationSlotCount).
std::size_t relation_slot(Relation rel) noexcept;

/// The nine SLT relations in declaration order.
const std::vector<Relation>& slt_relations();

bool relation_fits_layout(Relation rel, Layout layout) noexcept;

using NodeId = std::size_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  Relation rel;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Rooted labeled tree over math tokens (an SLT or an OPT).
struct FormulaGraph {
  Layout layout = Layout::kSlt;
  std::vector<MathToken> nodes;
  std::vector<Edge> edges;
  NodeId root = 0;

  std::size_t node_count() const noexcept { return nodes.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }

  /// Empty optional when the graph is a valid rooted tree whose labels fit
  /// its layout; otherwise a description of the first violation.
  std::optional<std::string> validation_error() const;
  bool is_valid() const { return !validation_error().has_value(); }

  /// Outgoing edge indices per node, ordered for traversal: SLT children
  /// by relation rank (NEXT last, so the baseline continues after any
  /// scripts), OPT children by ordinal; ties keep insertion order.
  std::vector<std::vector<std::size_t>> ordered_children() const;

  /// Incoming edge index per node (root and orphans get nullopt).
  std::vector<std::optional<std::size_t>> parent_edges() const;

  /// Copy with nodes renumbered in pre-order from the root and edges
  /// listed in the same order. Requires a valid tree.
  FormulaGraph canonical() const;

  friend bool operator==(const FormulaGraph&, const FormulaGraph&) = default;
};

}  // namespace mathgcl
