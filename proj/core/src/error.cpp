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

#include "mathgcl/error.hpp"

namespace mathgcl {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnbalancedDelimiter: return "UnbalancedDelimiter";
    case ErrorCode::kUnsupportedCommand: return "UnsupportedCommand";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBatchTooSmall: return "BatchTooSmall";
    case ErrorCode::kNoSharedNodes: return "NoSharedNodes";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kZeroQueryVector: return "ZeroQueryVector";
    case ErrorCode::kArtifactMismatch: return "ArtifactMismatch";
    case ErrorCode::kNoRelevantJudged: return "NoRelevantJudged";
    case ErrorCode::kNoPositiveJudgments: return "NoPositiveJudgments";
    case ErrorCode::kZeroInput: return "ZeroInput";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(compose(code, message, offset)),
      code_(code),
      offset_(offset),
      detail_(message) {}

std::string Error::compose(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> offset) {
  std::string out(error_code_name(code));
  if (offset) out += " at offset " + std::to_string(*offset);
  if (!message.empty()) out += ": " + message;
  return out;
}

Error Error::with_stage(std::string stage) const {
  Error copy = *this;
  copy.stage_ = std::move(stage);
  return copy;
}

}  // namespace mathgcl
