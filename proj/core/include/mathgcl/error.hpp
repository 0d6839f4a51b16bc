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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mathgcl {

enum class ErrorCode {
  kEmptyInput,
  kUnbalancedDelimiter,
  kUnsupportedCommand,
  kSyntaxError,
  kMalformedRecord,
  kEmptyCorpus,
  kDimensionMismatch,
  kBatchTooSmall,
  kNoSharedNodes,
  kShapeMismatch,
  kNonFiniteLoss,
  kEmptyGraph,
  kDuplicateId,
  kZeroVector,
  kZeroQueryVector,
  kArtifactMismatch,
  kNoRelevantJudged,
  kNoPositiveJudgments,
  kZeroInput,
  kEmptyIntersection,
  kConfigError,
  kIoError,
  kInvalidArgument,
};

/// Stable machine-readable name, e.g. "UnbalancedDelimiter".
std::string_view error_code_name(ErrorCode code) noexcept;

/// The single exception type thrown by the library. `offset` is set for
/// errors that point into an input string; `stage` is filled in by
/// pipeline-level callers ("parse", "embed", "query", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Returns a copy tagged with the pipeline stage that raised it.
  Error with_stage(std::string stage) const;

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             std::optional<std::size_t> offset);

  ErrorCode code_;
  std::optional<std::size_t> offset_;
  std::string stage_;
  std::string detail_;
};

}  // namespace mathgcl
