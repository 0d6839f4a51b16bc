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

#include "mathgcl/latex_parser.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

enum class LexKind { kLetter, kNumber, kCommand, kChar, kEnd };

struct Lexeme {
  LexKind kind = LexKind::kEnd;
  std::string text;
  std::size_t offset = 0;
};

bool is_spacing_command(std::string_view name) {
  return name == "," || name == ";" || name == ":" || name == "!" || name == " " ||
         name == "quad" || name == "qquad";
}

std::vector<Lexeme> lex(std::string_view src) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      out.push_back({LexKind::kLetter, std::string(1, src[i]), i});
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      out.push_back({LexKind::kNumber, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (c == '\\') {
      std::size_t j = i + 1;
      if (j >= src.size()) {
        throw Error(ErrorCode::kUnsupportedCommand, "dangling backslash", i);
      }
      if (std::isalpha(static_cast<unsigned char>(src[j]))) {
        while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
      } else {
        ++j;
      }
      std::string name(src.substr(i + 1, j - i - 1));
      if (!is_spacing_command(name)) out.push_back({LexKind::kCommand, std::move(name), i});
      i = j;
      continue;
    }
    out.push_back({LexKind::kChar, std::string(1, src[i]), i});
    ++i;
  }
  out.push_back({LexKind::kEnd, "", src.size()});
  return out;
}

const std::unordered_set<std::string>& greek_letters() {
  static const std::unordered_set<std::string> names = {
      "alpha", "beta",    "gamma", "delta", "epsilon", "varepsilon", "zeta",  "eta",
      "theta", "vartheta", "iota", "kappa", "lambda",  "mu",         "nu",    "xi",
      "pi",    "varpi",   "rho",   "varrho", "sigma",  "varsigma",   "tau",   "upsilon",
      "phi",   "varphi",  "chi",   "psi",   "omega",   "Gamma",      "Delta", "Theta",
      "Lambda", "Xi",     "Pi",    "Sigma", "Upsilon", "Phi",        "Psi",   "Omega"};
  return names;
}

const std::unordered_map<std::string, std::string>& symbol_variables() {
  static const std::unordered_map<std::string, std::string> names = {
      {"infty", "infty"}, {"partial", "partial"}, {"nabla", "nabla"}, {"ell", "ell"},
      {"hbar", "hbar"},   {"ldots", "dots"},      {"cdots", "dots"},  {"dots", "dots"}};
  return names;
}

const std::unordered_set<std::string>& function_names() {
  static const std::unordered_set<std::string> names = {
      "log",  "ln",   "lg",     "exp",    "sin",    "cos",  "tan",  "cot",
      "sec",  "csc",  "arcsin", "arccos", "arctan", "sinh", "cosh", "tanh",
      "max",  "min",  "det",    "gcd",    "lim",    "sup",  "inf",  "arg",
      "deg",  "dim",  "ker",    "Pr"};
  return names;
}

// Relation commands and characters mapped to their normalized names.
const std::unordered_map<std::string, std::string>& relation_commands() {
  static const std::unordered_map<std::string, std::string> names = {
      {"leq", "leq"},     {"le", "leq"},        {"geq", "geq"},   {"ge", "geq"},
      {"neq", "neq"},     {"ne", "neq"},        {"approx", "approx"},
      {"equiv", "equiv"}, {"sim", "sim"},       {"simeq", "simeq"},
      {"in", "in"},       {"notin", "notin"},   {"subset", "subset"},
      {"subseteq", "subseteq"}, {"to", "to"},   {"rightarrow", "to"}};
  return names;
}

const std::unordered_set<std::string>& matrix_environments() {
  static const std::unordered_set<std::string> names = {"matrix",  "bmatrix", "pmatrix",
                                                        "Bmatrix", "vmatrix", "Vmatrix"};
  return names;
}

std::string_view fence_word(std::string_view delim) {
  if (delim == "(" || delim == ")") return "paren";
  if (delim == "[" || delim == "]") return "bracket";
  if (delim == "{" || delim == "}") return "brace";
  if (delim == "|") return "bar";
  if (delim == ".") return "dot";
  return "";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(lex(src)) {}

  ExpressionTree run() {
    if (toks_.front().kind == LexKind::kEnd) {
      throw Error(ErrorCode::kEmptyInput, "formula contains no symbols");
    }
    tree_.root = parse_list();
    const Lexeme& t = peek();
    if (t.kind != LexKind::kEnd) {
      if (is_closer(t)) {
        throw Error(ErrorCode::kUnbalancedDelimiter, "unmatched '" + display(t) + "'",
                    t.offset);
      }
      throw Error(ErrorCode::kSyntaxError, "unexpected '" + display(t) + "'", t.offset);
    }
    return std::move(tree_);
  }

 private:
  // ---- token helpers -----------------------------------------------------
  const Lexeme& peek() const { return toks_[pos_]; }
  const Lexeme& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at_char(std::string_view c) const {
    return peek().kind == LexKind::kChar && peek().text == c;
  }
  bool at_command(std::string_view name) const {
    return peek().kind == LexKind::kCommand && peek().text == name;
  }

  static std::string display(const Lexeme& t) {
    if (t.kind == LexKind::kCommand) return "\\" + t.text;
    if (t.kind == LexKind::kEnd) return "end of input";
    return t.text;
  }

  static bool is_closer(const Lexeme& t) {
    if (t.kind == LexKind::kChar) return t.text == "}" || t.text == ")" || t.text == "]";
    if (t.kind == LexKind::kCommand) return t.text == "}" || t.text == "right" || t.text == "end";
    return false;
  }

  // Offset at which a missing closer is detected: the offending token, or
  // the last non-space byte when input ran out.
  std::size_t detection_offset() const {
    const Lexeme& t = peek();
    if (t.kind != LexKind::kEnd) return t.offset;
    std::size_t end = src_.size();
    while (end > 0 && std::isspace(static_cast<unsigned char>(src_[end - 1]))) --end;
    return end == 0 ? 0 : end - 1;
  }

  [[noreturn]] void unclosed(std::string_view opener, std::size_t opened_at) const {
    throw Error(ErrorCode::kUnbalancedDelimiter,
                "missing closer for '" + std::string(opener) + "' opened at offset " +
                    std::to_string(opened_at),
                detection_offset());
  }

  ExprId add(ExprNode node) {
    tree_.nodes.push_back(std::move(node));
    return static_cast<ExprId>(tree_.nodes.size() - 1);
  }

  ExprId binary(std::string op, std::string symbol, bool relation, ExprId lhs, ExprId rhs,
                std::size_t offset) {
    ExprNode n;
    n.kind = ExprKind::kBinary;
    n.op = std::move(op);
    n.symbol = std::move(symbol);
    n.relation = relation;
    n.children = {lhs, rhs};
    n.offset = offset;
    return add(std::move(n));
  }

  // ---- grammar -----------------------------------------------------------
  ExprId parse_list() {
    ExprId lhs = parse_relation();
    while (at_char(",")) {
      const std::size_t off = advance().offset;
      ExprId rhs = parse_relation();
      lhs = binary("comma", "comma", false, lhs, rhs, off);
    }
    return lhs;
  }

  std::optional<std::string> relation_name() const {
    const Lexeme& t = peek();
    if (t.kind == LexKind::kChar) {
      if (t.text == "=") return "eq";
      if (t.text == "<") return "lt";
      if (t.text == ">") return "gt";
    } else if (t.kind == LexKind::kCommand) {
      auto it = relation_commands().find(t.text);
      if (it != relation_commands().end()) return it->second;
    }
    return std::nullopt;
  }

  ExprId parse_relation() {
    ExprId lhs = parse_additive();
    while (auto name = relation_name()) {
      const std::size_t off = advance().offset;
      ExprId rhs = parse_additive();
      lhs = binary(*name, *name, true, lhs, rhs, off);
    }
    return lhs;
  }

  std::optional<std::string> additive_op() const {
    if (at_char("+")) return "plus";
    if (at_char("-")) return "minus";
    if (at_command("pm")) return "pm";
    if (at_command("mp")) return "mp";
    return std::nullopt;
  }

  ExprId parse_additive() {
    ExprId lhs;
    if (at_char("-")) {
      const std::size_t off = advance().offset;
      ExprNode n;
      n.kind = ExprKind::kNegate;
      n.children = {parse_term()};
      n.offset = off;
      lhs = add(std::move(n));
    } else {
      lhs = parse_term();
    }
    while (auto op = additive_op()) {
      const std::size_t off = advance().offset;
      ExprId rhs = parse_term();
      lhs = binary(*op, *op, false, lhs, rhs, off);
    }
    return lhs;
  }

  // (semantic op, surface symbol) for explicit multiplicative operators.
  std::optional<std::pair<std::string, std::string>> multiplicative_op() const {
    if (at_char("*")) return std::pair<std::string, std::string>{"times", "times"};
    if (at_char("/")) return std::pair<std::string, std::string>{"div", "slash"};
    if (at_command("cdot")) return std::pair<std::string, std::string>{"times", "cdot"};
    if (at_command("times")) return std::pair<std::string, std::string>{"times", "times"};
    if (at_command("div")) return std::pair<std::string, std::string>{"div", "div"};
    return std::nullopt;
  }

  ExprId parse_term() {
    ExprId lhs = parse_factor();
    for (;;) {
      if (auto op = multiplicative_op()) {
        const std::size_t off = advance().offset;
        ExprId rhs = parse_factor();
        lhs = binary(op->first, op->second, false, lhs, rhs, off);
      } else if (starts_factor(peek())) {
        const std::size_t off = peek().offset;
        ExprId rhs = parse_factor();
        lhs = binary("times", "", false, lhs, rhs, off);
      } else {
        return lhs;
      }
    }
  }

  bool starts_factor(const Lexeme& t) const {
    switch (t.kind) {
      case LexKind::kLetter:
      case LexKind::kNumber:
        return true;
      case LexKind::kChar:
        if (t.text == "{" || t.text == "(" || t.text == "[") return true;
        if (t.text == "|") return abs_depth_ == 0;
        return false;
      case LexKind::kCommand:
        return t.text == "{" || greek_letters().count(t.text) ||
               symbol_variables().count(t.text) || function_names().count(t.text) ||
               t.text == "frac" || t.text == "dfrac" || t.text == "tfrac" ||
               t.text == "sqrt" || t.text == "left" || t.text == "begin";
      case LexKind::kEnd:
        return false;
    }
    return false;
  }

  ExprId parse_factor() {
    ExprId base = parse_primary();
    return parse_scripts(base, /*onto_function=*/false);
  }

  // Attaches ^ and _ scripts. For functions the scripts live on the
  // function node itself; otherwise a kScript wrapper is created.
  ExprId parse_scripts(ExprId base, bool onto_function) {
    ExprId holder = kNoExpr;
    while (at_char("^") || at_char("_")) {
      const Lexeme op = advance();
      if (holder == kNoExpr) {
        if (onto_function) {
          holder = base;
        } else {
          ExprNode n;
          n.kind = ExprKind::kScript;
          n.children = {base};
          n.offset = op.offset;
          holder = add(std::move(n));
        }
      }
      const bool is_sup = op.text == "^";
      if ((is_sup ? tree_.nodes[holder].sup : tree_.nodes[holder].sub) != kNoExpr) {
        throw Error(ErrorCode::kSyntaxError,
                    is_sup ? "double superscript" : "double subscript", op.offset);
      }
      const ExprId arg = parse_script_argument();
      (is_sup ? tree_.nodes[holder].sup : tree_.nodes[holder].sub) = arg;
    }
    return holder == kNoExpr ? base : holder;
  }

  // A script takes a braced group or exactly one symbol; "a^23" is a^2 3.
  ExprId parse_script_argument() {
    Lexeme& t = toks_[pos_];
    if (t.kind == LexKind::kNumber && t.text.size() > 1) {
      if (t.text[1] == '.') {
        throw Error(ErrorCode::kSyntaxError, "decimal number must be braced in a script",
                    t.offset);
      }
      ExprNode n;
      n.kind = ExprKind::kNumber;
      n.text = t.text.substr(0, 1);
      n.offset = t.offset;
      t.text.erase(0, 1);
      t.offset += 1;
      return add(std::move(n));
    }
    if (t.kind == LexKind::kEnd) {
      throw Error(ErrorCode::kSyntaxError, "script is missing its argument",
                  detection_offset());
    }
    return parse_primary();
  }

  ExprId parse_braced() {
    if (!at_char("{")) {
      // Single-token argument, as in \frac12.
      return parse_script_argument();
    }
    const std::size_t open = advance().offset;
    if (at_char("}")) throw Error(ErrorCode::kSyntaxError, "empty group", open);
    const int saved_abs = abs_depth_;
    abs_depth_ = 0;
    const ExprId inner = parse_list();
    abs_depth_ = saved_abs;
    if (!at_char("}")) unclosed("{", open);
    advance();
    return inner;
  }

  ExprId make_group(std::string name, ExprId content, std::size_t offset) {
    ExprNode n;
    n.kind = ExprKind::kGroup;
    n.text = std::move(name);
    n.children = {content};
    n.offset = offset;
    return add(std::move(n));
  }

  ExprId parse_fenced(std::string_view open, std::string_view close, std::string_view name,
                      bool close_is_command) {
    const std::size_t off = advance().offset;
    const bool is_abs = name == "abs";
    const int saved_abs = abs_depth_;
    abs_depth_ = is_abs ? 1 : 0;
    if ((close_is_command ? at_command(close) : at_char(close))) {
      throw Error(ErrorCode::kSyntaxError, "empty group", off);
    }
    const ExprId inner = parse_list();
    abs_depth_ = saved_abs;
    const bool closed = close_is_command ? at_command(close) : at_char(close);
    if (!closed) unclosed(open, off);
    advance();
    return make_group(std::string(name), inner, off);
  }

  std::string read_delimiter(std::size_t command_offset) {
    const Lexeme& t = peek();
    if (t.kind == LexKind::kChar &&
        (t.text == "(" || t.text == ")" || t.text == "[" || t.text == "]" || t.text == "|" ||
         t.text == ".")) {
      return advance().text;
    }
    if (t.kind == LexKind::kCommand && (t.text == "{" || t.text == "}" || t.text == "|")) {
      return advance().text;
    }
    throw Error(ErrorCode::kSyntaxError, "expected a delimiter after \\left or \\right",
                t.kind == LexKind::kEnd ? command_offset : t.offset);
  }

  ExprId parse_left_right() {
    const std::size_t off = advance().offset;  // \left
    const std::string open = read_delimiter(off);
    const int saved_abs = abs_depth_;
    abs_depth_ = 0;
    const ExprId inner = parse_list();
    abs_depth_ = saved_abs;
    if (!at_command("right")) unclosed("\\left" + open, off);
    const std::size_t right_off = advance().offset;
    const std::string close = read_delimiter(right_off);
    const std::string_view a = fence_word(open);
    const std::string_view b = fence_word(close);
    std::string name;
    if (a == b) {
      name = a == "bar" ? "abs" : std::string(a);
    } else {
      name = std::string(a) + "_" + std::string(b);
    }
    return make_group(std::move(name), inner, off);
  }

  std::string read_environment_name(std::size_t command_offset) {
    if (!at_char("{")) {
      throw Error(ErrorCode::kSyntaxError, "expected '{' after environment command",
                  command_offset);
    }
    const std::size_t open = advance().offset;
    std::string name;
    while (peek().kind == LexKind::kLetter) name += advance().text;
    if (!at_char("}")) unclosed("{", open);
    advance();
    return name;
  }

  bool at_cell_end() const {
    return at_char("&") || at_command("\\") || at_command("end") ||
           peek().kind == LexKind::kEnd;
  }

  ExprId parse_matrix() {
    const std::size_t off = advance().offset;  // \begin
    const std::string env = read_environment_name(off);
    if (!matrix_environments().count(env)) {
      throw Error(ErrorCode::kUnsupportedCommand, "unsupported environment '" + env + "'",
                  off);
    }
    std::vector<std::vector<ExprId>> rows(1);
    const int saved_abs = abs_depth_;
    abs_depth_ = 0;
    for (;;) {
      if (at_cell_end()) {
        throw Error(ErrorCode::kSyntaxError, "empty matrix cell", detection_offset());
      }
      rows.back().push_back(parse_list());
      if (at_char("&")) {
        advance();
        continue;
      }
      if (at_command("\\")) {
        advance();
        if (at_command("end")) break;  // trailing row separator
        rows.emplace_back();
        continue;
      }
      if (at_command("end")) break;
      if (peek().kind == LexKind::kEnd) unclosed("\\begin{" + env + "}", off);
      if (is_closer(peek())) {
        throw Error(ErrorCode::kUnbalancedDelimiter, "unmatched '" + display(peek()) + "'",
                    peek().offset);
      }
      throw Error(ErrorCode::kSyntaxError, "unexpected '" + display(peek()) + "' in matrix",
                  peek().offset);
    }
    abs_depth_ = saved_abs;
    const std::size_t end_off = advance().offset;  // \end
    const std::string closing = read_environment_name(end_off);
    if (closing != env) {
      throw Error(ErrorCode::kUnbalancedDelimiter,
                  "\\end{" + closing + "} does not close \\begin{" + env + "}", end_off);
    }
    const std::size_t cols = rows.front().size();
    ExprNode n;
    n.kind = ExprKind::kMatrix;
    n.text = env;
    n.rows = rows.size();
    n.cols = cols;
    n.offset = off;
    for (const auto& row : rows) {
      if (row.size() != cols) {
        throw Error(ErrorCode::kSyntaxError, "matrix rows have different lengths", off);
      }
      n.children.insert(n.children.end(), row.begin(), row.end());
    }
    return add(std::move(n));
  }

  ExprId parse_function() {
    const Lexeme t = advance();
    ExprNode n;
    n.kind = ExprKind::kFunction;
    n.text = t.text;
    n.offset = t.offset;
    const ExprId id = add(std::move(n));
    parse_scripts(id, /*onto_function=*/true);
    if (starts_factor(peek())) {
      const ExprId arg = parse_factor();
      tree_.nodes[id].children.push_back(arg);
    }
    return id;
  }

  ExprId parse_primary() {
    const Lexeme& t = peek();
    switch (t.kind) {
      case LexKind::kLetter: {
        ExprNode n;
        n.kind = ExprKind::kVariable;
        n.text = t.text;
        n.offset = t.offset;
        advance();
        return add(std::move(n));
      }
      case LexKind::kNumber: {
        ExprNode n;
        n.kind = ExprKind::kNumber;
        n.text = t.text;
        n.offset = t.offset;
        advance();
        return add(std::move(n));
      }
      case LexKind::kChar: {
        if (t.text == "{") return parse_braced();
        if (t.text == "(") return parse_fenced("(", ")", "paren", false);
        if (t.text == "[") return parse_fenced("[", "]", "bracket", false);
        if (t.text == "|" && abs_depth_ == 0) return parse_fenced("|", "|", "abs", false);
        if (is_closer(t)) {
          throw Error(ErrorCode::kUnbalancedDelimiter, "unmatched '" + t.text + "'", t.offset);
        }
        const bool known = std::string_view("+-*/=<>^_,&|").find(t.text) != std::string_view::npos;
        throw Error(ErrorCode::kSyntaxError,
                    known ? "expected an operand before '" + t.text + "'"
                          : "unsupported character '" + t.text + "'",
                    t.offset);
      }
      case LexKind::kCommand:
        return parse_command();
      case LexKind::kEnd:
        throw Error(ErrorCode::kSyntaxError, "unexpected end of input", detection_offset());
    }
    throw Error(ErrorCode::kSyntaxError, "unreachable", t.offset);
  }

  ExprId parse_command() {
    const Lexeme& t = peek();
    const std::string& name = t.text;
    if (greek_letters().count(name)) {
      ExprNode n;
      n.kind = ExprKind::kVariable;
      n.text = name;
      n.offset = t.offset;
      advance();
      return add(std::move(n));
    }
    if (auto it = symbol_variables().find(name); it != symbol_variables().end()) {
      ExprNode n;
      n.kind = ExprKind::kVariable;
      n.text = it->second;
      n.offset = t.offset;
      advance();
      return add(std::move(n));
    }
    if (function_names().count(name)) return parse_function();
    if (name == "frac" || name == "dfrac" || name == "tfrac") {
      ExprNode n;
      n.kind = ExprKind::kFraction;
      n.offset = t.offset;
      advance();
      const ExprId num = parse_braced();
      const ExprId den = parse_braced();
      n.children = {num, den};
      return add(std::move(n));
    }
    if (name == "sqrt") {
      ExprNode n;
      n.kind = ExprKind::kRadical;
      n.text = "sqrt";
      n.offset = t.offset;
      advance();
      if (at_char("[")) {
        const std::size_t open = advance().offset;
        if (at_char("]")) throw Error(ErrorCode::kSyntaxError, "empty root index", open);
        n.index = parse_list();
        if (!at_char("]")) unclosed("[", open);
        advance();
      }
      n.children = {parse_braced()};
      return add(std::move(n));
    }
    if (name == "{") return parse_fenced("\\{", "}", "brace", true);
    if (name == "left") return parse_left_right();
    if (name == "begin") return parse_matrix();
    if (name == "}" || name == "right" || name == "end") {
      throw Error(ErrorCode::kUnbalancedDelimiter, "unmatched '\\" + name + "'", t.offset);
    }
    if (relation_commands().count(name) || name == "cdot" || name == "times" ||
        name == "div" || name == "pm" || name == "mp") {
      throw Error(ErrorCode::kSyntaxError, "expected an operand before '\\" + name + "'",
                  t.offset);
    }
    if (name == "\\") {
      throw Error(ErrorCode::kSyntaxError, "row separator outside a matrix", t.offset);
    }
    throw Error(ErrorCode::kUnsupportedCommand, "unknown control sequence '\\" + name + "'",
                t.offset);
  }

  std::string_view src_;
  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  int abs_depth_ = 0;
  ExpressionTree tree_;
};

void render(const ExpressionTree& tree, ExprId id, std::string& out) {
  const ExprNode& n = tree.at(id);
  auto list = [&](const std::vector<ExprId>& ids) {
    out += '(';
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += ',';
      render(tree, ids[i], out);
    }
    out += ')';
  };
  switch (n.kind) {
    case ExprKind::kVariable:
    case ExprKind::kNumber:
      out += n.text;
      return;
    case ExprKind::kBinary:
      out += n.op;
      list(n.children);
      return;
    case ExprKind::kNegate:
      out += "neg";
      list(n.children);
      return;
    case ExprKind::kScript: {
      std::vector<ExprId> parts{n.children[0]};
      if (n.sub != kNoExpr && n.sup != kNoExpr) {
        out += "subsup";
        parts.push_back(n.sub);
        parts.push_back(n.sup);
      } else if (n.sup != kNoExpr) {
        out += "sup";
        parts.push_back(n.sup);
      } else {
        out += "sub";
        parts.push_back(n.sub);
      }
      list(parts);
      return;
    }
    case ExprKind::kFraction:
      out += "frac";
      list(n.children);
      return;
    case ExprKind::kRadical:
      out += "sqrt";
      if (n.index != kNoExpr) {
        out += '[';
        render(tree, n.index, out);
        out += ']';
      }
      list(n.children);
      return;
    case ExprKind::kFunction:
      out += n.text;
      if (n.sub != kNoExpr) {
        out += "_[";
        render(tree, n.sub, out);
        out += ']';
      }
      if (n.sup != kNoExpr) {
        out += "^[";
        render(tree, n.sup, out);
        out += ']';
      }
      list(n.children);
      return;
    case ExprKind::kGroup:
      out += n.text;
      list(n.children);
      return;
    case ExprKind::kMatrix:
      out += n.text + std::to_string(n.rows) + "x" + std::to_string(n.cols);
      list(n.children);
      return;
  }
}

}  // namespace

std::string ExpressionTree::debug_string() const {
  std::string out;
  if (root != kNoExpr) render(*this, root, out);
  return out;
}

ExpressionTree parse_latex(std::string_view source) { return Parser(source).run(); }

bool is_commutative_op(std::string_view op) noexcept {
  return op == "plus" || op == "times" || op == "eq";
}

}  // namespace mathgcl
