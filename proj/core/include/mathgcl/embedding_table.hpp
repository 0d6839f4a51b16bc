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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mathgcl {

inline constexpr std::size_t kEmbeddingDim = 100;

struct SubwordSpec {
  std::size_t min_n = 3;
  std::size_t max_n = 6;
  std::uint32_t bucket_count = 2'000'000;

  friend bool operator==(const SubwordSpec&, const SubwordSpec&) = default;
};

/// Character n-grams of "<token>" with lengths in [min_n, max_n].
std::vector<std::string> character_ngrams(std::string_view token, const SubwordSpec& spec);

/// FNV-1a 32-bit hash used to place n-grams in buckets.
std::uint32_t ngram_hash(std::string_view ngram) noexcept;

/// Token embeddings with subword composition.
///
/// A vocabulary word's vector is its own row plus the rows of its hashed
/// character n-grams. Tokens outside the vocabulary get the mean of their
/// n-gram rows. Bucket rows are materialized only for n-grams seen during
/// training; any other bucket keeps its deterministic initial value, which
/// is recomputed from (init_seed, bucket) on demand.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, SubwordSpec spec, std::uint64_t init_seed);

  std::size_t dim() const noexcept { return dim_; }
  const SubwordSpec& subwords() const noexcept { return spec_; }
  std::uint64_t init_seed() const noexcept { return init_seed_; }
  std::size_t vocab_size() const noexcept { return vocab_.size(); }
  std::size_t materialized_buckets() const noexcept { return bucket_ids_.size(); }
  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }

  std::optional<std::size_t> word_index(std::string_view token) const;

  /// Adds a word with its deterministic initial row; returns its index.
  std::size_t add_word(std::string token);

  std::span<float> word_row(std::size_t index);
  std::span<const float> word_row(std::size_t index) const;

  /// Row index of a bucket, materializing it if needed.
  std::size_t materialize_bucket(std::uint32_t bucket);
  std::span<float> bucket_row(std::size_t row);
  std::span<const float> bucket_row(std::size_t row) const;

  std::vector<std::uint32_t> buckets_for(std::string_view token) const;

  struct Lookup {
    std::vector<float> vector;
    bool in_vocabulary = false;
    bool degenerate = false;  // no n-grams could be extracted; vector is zero
  };
  Lookup lookup(std::string_view token) const;

  void save(const std::filesystem::path& path, std::uint64_t config_hash = 0) const;
  static EmbeddingTable load(const std::filesystem::path& path,
                             std::uint64_t* config_hash = nullptr);

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  void initial_row(std::uint64_t key, std::span<float> out) const;
  void add_bucket(std::uint32_t bucket, std::span<const float> values);

  std::size_t dim_ = kEmbeddingDim;
  SubwordSpec spec_;
  std::uint64_t init_seed_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> word_ids_;
  std::vector<float> word_rows_;
  std::vector<std::uint32_t> bucket_ids_;
  std::unordered_map<std::uint32_t, std::size_t> bucket_rows_index_;
  std::vector<float> bucket_rows_;
};

/// Vector for a token. Never fails and never returns non-finite values;
/// `warning` (when given) is set for tokens with no extractable n-grams.
std::vector<float> embed_token(const EmbeddingTable& table, std::string_view token,
                               bool* warning = nullptr);

}  // namespace mathgcl
