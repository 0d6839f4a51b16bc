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

#include "mathgcl/graph_builders.hpp"

#include <algorithm>
#include <memory>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

// ---------------------------------------------------------------- SLT ----

class SltBuilder {
 public:
  explicit SltBuilder(const ExpressionTree& tree) : tree_(tree) {}

  FormulaGraph build() {
    graph_.layout = Layout::kSlt;
    const Span whole = emit(tree_.root);
    graph_.root = whole.head;
    return graph_.canonical();
  }

 private:
  // First and last baseline node of an emitted sub-expression.
  struct Span {
    NodeId head;
    NodeId tail;
  };

  NodeId node(TokenKind kind, std::string value) {
    graph_.nodes.push_back(MathToken{kind, std::move(value)});
    return graph_.nodes.size() - 1;
  }

  void link(NodeId src, NodeId dst, RelationKind kind) {
    graph_.edges.push_back(Edge{src, dst, Relation{kind, 0}});
  }

  Span emit(ExprId id) {
    const ExprNode& n = tree_.at(id);
    switch (n.kind) {
      case ExprKind::kVariable: {
        const NodeId v = node(TokenKind::kVariable, n.text);
        return {v, v};
      }
      case ExprKind::kNumber: {
        const NodeId v = node(TokenKind::kNumber, n.text);
        return {v, v};
      }
      case ExprKind::kBinary: {
        const Span lhs = emit(n.children[0]);
        NodeId tail = lhs.tail;
        if (!n.symbol.empty()) {
          const NodeId op = node(n.relation ? TokenKind::kRelation : TokenKind::kOperator,
                                 n.symbol);
          link(tail, op, RelationKind::kNext);
          tail = op;
        }
        const Span rhs = emit(n.children[1]);
        link(tail, rhs.head, RelationKind::kNext);
        return {lhs.head, rhs.tail};
      }
      case ExprKind::kNegate: {
        const NodeId op = node(TokenKind::kOperator, "minus");
        const Span operand = emit(n.children[0]);
        link(op, operand.head, RelationKind::kNext);
        return {op, operand.tail};
      }
      case ExprKind::kScript: {
        const Span base = emit(n.children[0]);
        attach_scripts(base.tail, n);
        return base;
      }
      case ExprKind::kFraction: {
        const NodeId frac = node(TokenKind::kFraction, "frac");
        link(frac, emit(n.children[0]).head, RelationKind::kOver);
        link(frac, emit(n.children[1]).head, RelationKind::kUnder);
        return {frac, frac};
      }
      case ExprKind::kRadical: {
        const NodeId rad = node(TokenKind::kRadical, n.text);
        if (n.index != kNoExpr) link(rad, emit(n.index).head, RelationKind::kPreSup);
        link(rad, emit(n.children[0]).head, RelationKind::kWithin);
        return {rad, rad};
      }
      case ExprKind::kFunction: {
        const NodeId fn = node(TokenKind::kFunction, n.text);
        attach_scripts(fn, n);
        if (n.children.empty()) return {fn, fn};
        const Span arg = emit(n.children[0]);
        link(fn, arg.head, RelationKind::kNext);
        return {fn, arg.tail};
      }
      case ExprKind::kGroup: {
        const NodeId group = node(TokenKind::kGroup, n.text);
        link(group, emit(n.children[0]).head, RelationKind::kWithin);
        return {group, group};
      }
      case ExprKind::kMatrix: {
        std::string value = std::to_string(n.rows) + "x" + std::to_string(n.cols);
        if (n.text == "vmatrix" || n.text == "Vmatrix") value = "v" + value;
        const NodeId matrix = node(TokenKind::kMatrix, value);
        for (std::size_t r = 0; r < n.rows; ++r) {
          std::optional<NodeId> prev_tail;
          for (std::size_t c = 0; c < n.cols; ++c) {
            const Span cell = emit(n.children[r * n.cols + c]);
            if (prev_tail) {
              link(*prev_tail, cell.head, RelationKind::kNext);
            } else {
              link(matrix, cell.head, RelationKind::kElement);
            }
            prev_tail = cell.tail;
          }
        }
        return {matrix, matrix};
      }
    }
    throw Error(ErrorCode::kSyntaxError, "unknown expression node");
  }

  void attach_scripts(NodeId anchor, const ExprNode& n) {
    if (n.sup != kNoExpr) link(anchor, emit(n.sup).head, RelationKind::kSup);
    if (n.sub != kNoExpr) link(anchor, emit(n.sub).head, RelationKind::kSub);
  }

  const ExpressionTree& tree_;
  FormulaGraph graph_;
};

// ---------------------------------------------------------------- OPT ----

struct Term {
  MathToken token;
  std::vector<Term> args;
  std::string key;  // canonical serialization of the subtree
  std::size_t size = 1;
};

void finalize(Term& t) {
  t.size = 1;
  t.key = t.token.str();
  if (!t.args.empty()) {
    t.key += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) t.key += ',';
      t.key += t.args[i].key;
      t.size += t.args[i].size;
    }
    t.key += ')';
  }
}

Term leaf(TokenKind kind, std::string value) {
  Term t{MathToken{kind, std::move(value)}, {}, {}, 1};
  finalize(t);
  return t;
}

Term apply(TokenKind kind, std::string value, std::vector<Term> args) {
  Term t{MathToken{kind, std::move(value)}, std::move(args), {}, 1};
  finalize(t);
  return t;
}

class OptBuilder {
 public:
  explicit OptBuilder(const ExpressionTree& tree) : tree_(tree) {}

  FormulaGraph build() {
    const Term root = term(tree_.root);
    FormulaGraph g;
    g.layout = Layout::kOpt;
    g.root = 0;
    emit(root, g, std::nullopt, 0);
    return g;
  }

 private:
  // Groups other than |x| carry no operator meaning in an operator tree.
  ExprId skip_groups(ExprId id) const {
    while (tree_.at(id).kind == ExprKind::kGroup && tree_.at(id).text != "abs") {
      id = tree_.at(id).children[0];
    }
    return id;
  }

  void collect_operands(ExprId id, const std::string& op, std::vector<Term>& out) {
    const ExprId inner = skip_groups(id);
    const ExprNode& n = tree_.at(inner);
    if (n.kind == ExprKind::kBinary && n.op == op) {
      collect_operands(n.children[0], op, out);
      collect_operands(n.children[1], op, out);
    } else {
      out.push_back(term(inner));
    }
  }

  Term term(ExprId id) {
    const ExprNode& n = tree_.at(skip_groups(id));
    switch (n.kind) {
      case ExprKind::kVariable:
        return leaf(TokenKind::kVariable, n.text);
      case ExprKind::kNumber:
        return leaf(TokenKind::kNumber, n.text);
      case ExprKind::kBinary: {
        const TokenKind kind = n.relation ? TokenKind::kRelation : TokenKind::kOperator;
        std::vector<Term> args;
        if (is_commutative_op(n.op)) {
          collect_operands(n.children[0], n.op, args);
          collect_operands(n.children[1], n.op, args);
          // Larger operands first, then byte order of the serialization.
          std::stable_sort(args.begin(), args.end(), [](const Term& a, const Term& b) {
            if (a.size != b.size) return a.size > b.size;
            return a.key < b.key;
          });
        } else if (n.op == "comma") {
          collect_operands(n.children[0], n.op, args);
          collect_operands(n.children[1], n.op, args);
        } else {
          args.push_back(term(n.children[0]));
          args.push_back(term(n.children[1]));
        }
        return apply(kind, n.op, std::move(args));
      }
      case ExprKind::kNegate:
        return apply(TokenKind::kOperator, "neg", {term(n.children[0])});
      case ExprKind::kScript: {
        Term base = term(n.children[0]);
        if (n.sub != kNoExpr) {
          std::vector<Term> args;
          args.push_back(std::move(base));
          args.push_back(term(n.sub));
          base = apply(TokenKind::kOperator, "subscript", std::move(args));
        }
        if (n.sup != kNoExpr) {
          std::vector<Term> args;
          args.push_back(std::move(base));
          args.push_back(term(n.sup));
          base = apply(TokenKind::kOperator, "pow", std::move(args));
        }
        return base;
      }
      case ExprKind::kFraction:
        return apply(TokenKind::kFraction, "frac",
                     {term(n.children[0]), term(n.children[1])});
      case ExprKind::kRadical: {
        std::vector<Term> args{term(n.children[0])};
        if (n.index != kNoExpr) args.push_back(term(n.index));
        return apply(TokenKind::kRadical, n.text, std::move(args));
      }
      case ExprKind::kFunction: {
        std::vector<Term> args;
        if (!n.children.empty()) args.push_back(term(n.children[0]));
        if (n.sub != kNoExpr) args.push_back(term(n.sub));
        Term fn = apply(TokenKind::kFunction, n.text, std::move(args));
        if (n.sup != kNoExpr) {
          std::vector<Term> pow_args;
          pow_args.push_back(std::move(fn));
          pow_args.push_back(term(n.sup));
          fn = apply(TokenKind::kOperator, "pow", std::move(pow_args));
        }
        return fn;
      }
      case ExprKind::kGroup:  // only |x| reaches here
        return apply(TokenKind::kOperator, "abs", {term(n.children[0])});
      case ExprKind::kMatrix: {
        std::string value = std::to_string(n.rows) + "x" + std::to_string(n.cols);
        if (n.text == "vmatrix" || n.text == "Vmatrix") value = "v" + value;
        std::vector<Term> cells;
        for (ExprId c : n.children) cells.push_back(term(c));
        return apply(TokenKind::kMatrix, value, std::move(cells));
      }
    }
    throw Error(ErrorCode::kSyntaxError, "unknown expression node");
  }

  static void emit(const Term& t, FormulaGraph& g, std::optional<NodeId> parent,
                   std::uint16_t ordinal) {
    const NodeId id = g.nodes.size();
    g.nodes.push_back(t.token);
    if (parent) g.edges.push_back(Edge{*parent, id, Relation::arg(ordinal)});
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      emit(t.args[i], g, id, static_cast<std::uint16_t>(i));
    }
  }

  const ExpressionTree& tree_;
};

}  // namespace

FormulaGraph build_slt(const ExpressionTree& tree) { return SltBuilder(tree).build(); }

FormulaGraph build_opt(const ExpressionTree& tree) { return OptBuilder(tree).build(); }

FormulaGraph build_graph(const ExpressionTree& tree, Layout layout) {
  return layout == Layout::kSlt ? build_slt(tree) : build_opt(tree);
}

FormulaGraph graph_from_latex(std::string_view latex, Layout layout) {
  return build_graph(parse_latex(latex), layout);
}

}  // namespace mathgcl
