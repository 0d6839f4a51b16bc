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
#include <string>
#include <vector>

#include "mathgcl/graph_io.hpp"
#include "mathgcl/trec_io.hpp"

namespace mathgcl {

inline constexpr std::size_t kSyntheticTemplates = 5;

struct SyntheticCorpus {
  std::vector<CorpusRecord> formulas;
  std::vector<std::size_t> template_of;  // parallel to formulas
  std::vector<std::string> query_ids;    // each query is itself a corpus formula
  QrelSet qrels;                         // same template -> 4, otherwise 0; self unjudged
};

/// Formulas from five structural templates, each with a distinct operator
/// tree. Deterministic for a given seed.
SyntheticCorpus generate_synthetic_corpus(std::size_t per_template = 40,
                                          std::size_t queries_per_template = 5,
                                          std::uint64_t seed = 2024);

}  // namespace mathgcl
