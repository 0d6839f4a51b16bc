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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mathgcl/metrics.hpp"
#include "mathgcl/retrieval_index.hpp"

namespace mathgcl {

/// Graded judgments keyed by query id.
class QrelSet {
 public:
  /// Throws kMalformedRecord for grades outside 0..4 or a repeated pair.
  void add(const std::string& query_id, const std::string& formula_id, int grade);

  const Judgments* find(const std::string& query_id) const;
  std::vector<std::string> query_ids() const;
  std::size_t size() const noexcept { return pairs_; }

 private:
  std::map<std::string, Judgments> by_query_;
  std::size_t pairs_ = 0;
};

/// Lines "query_id formula_id grade" (a TREC "query_id 0 formula_id grade"
/// line is also accepted).
QrelSet read_qrels(const std::filesystem::path& path);
void write_qrels(const std::filesystem::path& path, const QrelSet& qrels);

/// query id -> ranked formula ids, ordered by rank.
using RunFile = std::map<std::string, std::vector<ScoredId>>;

/// Lines "query_id formula_id rank score"; rank is 1-based.
RunFile read_run(const std::filesystem::path& path);
void write_run(const std::filesystem::path& path, std::span<const RankedList> lists);

}  // namespace mathgcl
