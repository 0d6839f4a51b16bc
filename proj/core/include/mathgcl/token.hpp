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

#include <compare>
#include <string>
#include <string_view>

namespace mathgcl {

enum class TokenKind {
  kVariable,  // V
  kNumber,    // N
  kOperator,  // O
  kFunction,  // T
  kFraction,  // F
  kRadical,   // R
  kMatrix,    // M
  kRelation,  // U
  kGroup,     // G
};

char token_kind_prefix(TokenKind kind) noexcept;

/// A node symbol. Serialized as "<prefix>!<value>", e.g. "V!a", "U!eq".
struct MathToken {
  TokenKind kind = TokenKind::kVariable;
  std::string value;

  std::string str() const;

  /// Parses "K!value"; throws Error(kMalformedRecord) on bad input.
  static MathToken parse(std::string_view text);

  friend bool operator==(const MathToken&, const MathToken&) = default;
  friend auto operator<=>(const MathToken&, const MathToken&) = default;
};

/// True when `value` is usable as a token value: non-empty, no whitespace,
/// no '!'.
bool is_valid_token_value(std::string_view value) noexcept;

}  // namespace mathgcl
