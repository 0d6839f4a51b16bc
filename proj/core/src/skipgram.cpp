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

#include "mathgcl/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mathgcl/error.hpp"

namespace mathgcl {

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double power) {
  if (counts.empty()) throw Error(ErrorCode::kEmptyCorpus, "negative sampler needs a vocabulary");
  cumulative_.reserve(counts.size());
  double total = 0.0;
  for (std::uint64_t c : counts) {
    total += std::pow(static_cast<double>(c), power);
    cumulative_.push_back(total);
  }
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

std::size_t NegativeSampler::sample(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                               cumulative_.size() - 1);
}

double NegativeSampler::probability(std::size_t index) const {
  return cumulative_[index] - (index == 0 ? 0.0 : cumulative_[index - 1]);
}

namespace {

float sigmoid(float x) {
  if (x > 20.0f) return 1.0f;
  if (x < -20.0f) return 0.0f;
  return 1.0f / (1.0f + std::exp(-x));
}

}  // namespace

EmbeddingTable train_subword_skipgram(const WalkCorpus& corpus, const SkipGramConfig& config) {
  if (config.window == 0 || config.epochs == 0 || config.dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "window, epochs and dim must be positive");
  }
  // Vocabulary ordered by (count desc, token asc).
  std::map<std::string, std::uint64_t> counts;
  for (const auto& seq : corpus.sequences) {
    for (const auto& tok : seq) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> vocab;
  for (auto& [tok, c] : counts) {
    if (c >= config.min_count) vocab.emplace_back(tok, c);
  }
  if (vocab.empty()) throw Error(ErrorCode::kEmptyCorpus, "walk corpus has no trainable tokens");
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  const std::size_t dim = config.dim;
  EmbeddingTable table(dim, config.subwords, config.seed);
  std::vector<std::uint64_t> freq;
  for (auto& [tok, c] : vocab) {
    table.add_word(tok);
    freq.push_back(c);
  }

  // Materialize every n-gram bucket up front, in bucket-id order.
  std::vector<std::vector<std::uint32_t>> word_buckets(vocab.size());
  std::vector<std::uint32_t> all_buckets;
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    word_buckets[w] = table.buckets_for(vocab[w].first);
    all_buckets.insert(all_buckets.end(), word_buckets[w].begin(), word_buckets[w].end());
  }
  std::sort(all_buckets.begin(), all_buckets.end());
  all_buckets.erase(std::unique(all_buckets.begin(), all_buckets.end()), all_buckets.end());
  for (std::uint32_t b : all_buckets) table.materialize_bucket(b);
  std::vector<std::vector<std::size_t>> word_bucket_rows(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    for (std::uint32_t b : word_buckets[w]) {
      word_bucket_rows[w].push_back(table.materialize_bucket(b));
    }
  }

  // Sequences as vocabulary ids.
  std::vector<std::vector<std::size_t>> ids;
  ids.reserve(corpus.sequences.size());
  std::uint64_t total_tokens = 0;
  for (const auto& seq : corpus.sequences) {
    std::vector<std::size_t> row;
    for (const auto& tok : seq) {
      if (auto i = table.word_index(tok)) row.push_back(*i);
    }
    total_tokens += row.size();
    ids.push_back(std::move(row));
  }

  const NegativeSampler sampler(freq);
  std::vector<float> output(vocab.size() * dim, 0.0f);
  std::vector<float> hidden(dim);
  std::vector<float> grad(dim);
  Rng rng(derive_seed(config.seed, 0x5347ULL));
  const double total_work = static_cast<double>(config.epochs) * static_cast<double>(total_tokens);
  std::uint64_t processed = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& seq : ids) {
      for (std::size_t i = 0; i < seq.size(); ++i) {
        const float lr = static_cast<float>(
            config.learning_rate * std::max(0.0, 1.0 - static_cast<double>(processed) / total_work));
        ++processed;
        const std::size_t center = seq[i];

        // hidden = word row + n-gram rows
        const auto& rows = word_bucket_rows[center];
        std::copy_n(table.word_row(center).begin(), dim, hidden.begin());
        for (std::size_t r : rows) {
          const auto b = table.bucket_row(r);
          for (std::size_t k = 0; k < dim; ++k) hidden[k] += b[k];
        }
        std::fill(grad.begin(), grad.end(), 0.0f);

        const std::size_t span = 1 + rng.uniform_index(config.window);
        const std::size_t lo = i >= span ? i - span : 0;
        const std::size_t hi = std::min(seq.size() - 1, i + span);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == i) continue;
          const std::size_t target = seq[c];
          for (std::size_t s = 0; s <= config.negatives; ++s) {
            std::size_t word = target;
            float label = 1.0f;
            if (s > 0) {
              word = sampler.sample(rng);
              if (word == target) continue;
              label = 0.0f;
            }
            float* out = output.data() + word * dim;
            float dot = 0.0f;
            for (std::size_t k = 0; k < dim; ++k) dot += out[k] * hidden[k];
            const float alpha = lr * (label - sigmoid(dot));
            for (std::size_t k = 0; k < dim; ++k) {
              grad[k] += alpha * out[k];
              out[k] += alpha * hidden[k];
            }
          }
        }
        // Each component receives grad / n so the composed vector moves by grad.
        const float share = 1.0f / static_cast<float>(rows.size() + 1);
        for (std::size_t k = 0; k < dim; ++k) grad[k] *= share;
        auto wrow = table.word_row(center);
        for (std::size_t k = 0; k < dim; ++k) wrow[k] += grad[k];
        for (std::size_t r : rows) {
          auto b = table.bucket_row(r);
          for (std::size_t k = 0; k < dim; ++k) b[k] += grad[k];
        }
      }
    }
  }
  return table;
}

}  // namespace mathgcl
