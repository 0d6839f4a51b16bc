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

#include <string_view>

#include "mathgcl/formula_graph.hpp"
#include "mathgcl/latex_parser.hpp"

namespace mathgcl {

/// Symbol layout tree: baseline symbols chained with NEXT, scripts with
/// SUP/SUB, fraction parts with OVER/UNDER, radicand and fence contents
/// with WITHIN, root index with PRE_SUP, matrix rows with ELEMENT.
/// The result is in canonical pre-order.
FormulaGraph build_slt(const ExpressionTree& tree);

/// Operator tree: operators are internal nodes with ARG(i) operands.
/// Operands of commutative operators (plus, times, eq) are flattened and
/// put in canonical order, so reordered operands give the same tree.
FormulaGraph build_opt(const ExpressionTree& tree);

FormulaGraph build_graph(const ExpressionTree& tree, Layout layout);

/// parse_latex followed by build_graph.
FormulaGraph graph_from_latex(std::string_view latex, Layout layout);

}  // namespace mathgcl
