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
#include <span>
#include <vector>

#include "mathgcl/embedding_table.hpp"
#include "mathgcl/rng.hpp"
#include "mathgcl/walks.hpp"

namespace mathgcl {

struct SkipGramConfig {
  std::size_t dim = kEmbeddingDim;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.05;  // decays linearly to 0 over training
  std::size_t min_count = 1;
  SubwordSpec subwords;
  std::uint64_t seed = 1;
};

/// Draws vocabulary indices with probability proportional to count^power.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const std::uint64_t> counts, double power = 0.75);

  std::size_t sample(Rng& rng) const;
  double probability(std::size_t index) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

/// Skip-gram with negative sampling over subword-composed input vectors.
/// Deterministic for a fixed config (single-threaded). Throws
/// Error(kEmptyCorpus) when no token survives min_count.
EmbeddingTable train_subword_skipgram(const WalkCorpus& corpus, const SkipGramConfig& config);

}  // namespace mathgcl
