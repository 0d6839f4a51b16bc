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
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace mathgcl {

enum class ExprKind {
  kVariable,  // text = name ("a", "alpha")
  kNumber,    // text = digits, optionally with one decimal point
  kBinary,    // op = semantic name, symbol = surface name ("" = juxtaposition)
  kNegate,    // unary minus
  kScript,    // children[0] = base; sup/sub slots
  kFraction,  // children = {numerator, denominator}
  kRadical,   // children = {radicand}; index = optional root index
  kFunction,  // text = name; children = {argument} or {}; sup/sub slots
  kGroup,     // text = fence name ("paren", "bracket", "brace", "abs", ...)
  kMatrix,    // text = environment; children = cells, row-major
};

using ExprId = std::uint32_t;
inline constexpr ExprId kNoExpr = std::numeric_limits<ExprId>::max();

struct ExprNode {
  ExprKind kind = ExprKind::kVariable;
  std::string text;
  std::string op;
  std::string symbol;
  bool relation = false;
  std::vector<ExprId> children;
  ExprId sup = kNoExpr;
  ExprId sub = kNoExpr;
  ExprId index = kNoExpr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;

  friend bool operator==(const ExprNode&, const ExprNode&) = default;
};

/// Arena-allocated expression tree produced by parse_latex.
struct ExpressionTree {
  std::vector<ExprNode> nodes;
  ExprId root = kNoExpr;

  const ExprNode& at(ExprId id) const { return nodes.at(id); }

  /// Compact prefix rendering, e.g. "eq(plus(sup(a,3),sup(b,2)),0)".
  std::string debug_string() const;

  friend bool operator==(const ExpressionTree&, const ExpressionTree&) = default;
};

/// Parses the supported LaTeX subset (see docs/grammar.md). Throws
/// mathgcl::Error with kEmptyInput, kUnbalancedDelimiter,
/// kUnsupportedCommand or kSyntaxError; the latter three carry the byte
/// offset at which the problem was detected.
ExpressionTree parse_latex(std::string_view source);

/// Operators whose operands the OPT builder may reorder.
bool is_commutative_op(std::string_view op) noexcept;

}  // namespace mathgcl
