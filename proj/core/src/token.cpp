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

#include "mathgcl/token.hpp"

#include <cctype>

#include "mathgcl/error.hpp"

namespace mathgcl {

char token_kind_prefix(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::kVariable: return 'V';
    case TokenKind::kNumber: return 'N';
    case TokenKind::kOperator: return 'O';
    case TokenKind::kFunction: return 'T';
    case TokenKind::kFraction: return 'F';
    case TokenKind::kRadical: return 'R';
    case TokenKind::kMatrix: return 'M';
    case TokenKind::kRelation: return 'U';
    case TokenKind::kGroup: return 'G';
  }
  return '?';
}

bool is_valid_token_value(std::string_view value) noexcept {
  if (value.empty()) return false;
  for (char c : value) {
    if (c == '!' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string MathToken::str() const {
  std::string out;
  out.reserve(value.size() + 2);
  out += token_kind_prefix(kind);
  out += '!';
  out += value;
  return out;
}

MathToken MathToken::parse(std::string_view text) {
  if (text.size() < 3 || text[1] != '!') {
    throw Error(ErrorCode::kMalformedRecord,
                "token '" + std::string(text) + "' is not of the form K!value");
  }
  MathToken token;
  switch (text[0]) {
    case 'V': token.kind = TokenKind::kVariable; break;
    case 'N': token.kind = TokenKind::kNumber; break;
    case 'O': token.kind = TokenKind::kOperator; break;
    case 'T': token.kind = TokenKind::kFunction; break;
    case 'F': token.kind = TokenKind::kFraction; break;
    case 'R': token.kind = TokenKind::kRadical; break;
    case 'M': token.kind = TokenKind::kMatrix; break;
    case 'U': token.kind = TokenKind::kRelation; break;
    case 'G': token.kind = TokenKind::kGroup; break;
    default:
      throw Error(ErrorCode::kMalformedRecord,
                  "unknown token kind '" + std::string(1, text[0]) + "'");
  }
  token.value = std::string(text.substr(2));
  if (!is_valid_token_value(token.value)) {
    throw Error(ErrorCode::kMalformedRecord,
                "invalid token value in '" + std::string(text) + "'");
  }
  return token;
}

}  // namespace mathgcl
