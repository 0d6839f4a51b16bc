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

#include "mathgcl/embedding_table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mathgcl/binary_io.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {

namespace {
constexpr std::uint32_t kTableVersion = 1;
constexpr std::uint64_t kBucketStream = 0x42554b54ULL;  // "BUKT"
}  // namespace

std::vector<std::string> character_ngrams(std::string_view token, const SubwordSpec& spec) {
  std::string wrapped;
  wrapped.reserve(token.size() + 2);
  wrapped += '<';
  wrapped += token;
  wrapped += '>';
  std::vector<std::string> out;
  for (std::size_t n = spec.min_n; n <= spec.max_n; ++n) {
    if (n > wrapped.size()) break;
    for (std::size_t i = 0; i + n <= wrapped.size(); ++i) out.push_back(wrapped.substr(i, n));
  }
  return out;
}

std::uint32_t ngram_hash(std::string_view ngram) noexcept {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : ngram) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

EmbeddingTable::EmbeddingTable(std::size_t dim, SubwordSpec spec, std::uint64_t init_seed)
    : dim_(dim), spec_(spec), init_seed_(init_seed) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  if (spec.bucket_count == 0 || spec.min_n == 0 || spec.min_n > spec.max_n) {
    throw Error(ErrorCode::kInvalidArgument, "invalid subword configuration");
  }
}

void EmbeddingTable::initial_row(std::uint64_t key, std::span<float> out) const {
  // uniform(-1/dim, 1/dim), a pure function of (seed, key, component)
  const double scale = 1.0 / static_cast<double>(dim_);
  const std::uint64_t base = derive_seed(init_seed_, key);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint64_t bits = mix_seed(base + k);
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    out[k] = static_cast<float>((2.0 * u - 1.0) * scale);
  }
}

std::optional<std::size_t> EmbeddingTable::word_index(std::string_view token) const {
  auto it = word_ids_.find(std::string(token));
  if (it == word_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingTable::add_word(std::string token) {
  if (auto existing = word_index(token)) return *existing;
  const std::size_t index = vocab_.size();
  word_rows_.resize(word_rows_.size() + dim_);
  initial_row(fnv1a64(token), std::span<float>(word_rows_).subspan(index * dim_, dim_));
  word_ids_.emplace(token, index);
  vocab_.push_back(std::move(token));
  return index;
}

std::span<float> EmbeddingTable::word_row(std::size_t index) {
  return std::span<float>(word_rows_).subspan(index * dim_, dim_);
}

std::span<const float> EmbeddingTable::word_row(std::size_t index) const {
  return std::span<const float>(word_rows_).subspan(index * dim_, dim_);
}

std::size_t EmbeddingTable::materialize_bucket(std::uint32_t bucket) {
  auto it = bucket_rows_index_.find(bucket);
  if (it != bucket_rows_index_.end()) return it->second;
  const std::size_t row = bucket_ids_.size();
  bucket_rows_.resize(bucket_rows_.size() + dim_);
  initial_row(kBucketStream ^ (static_cast<std::uint64_t>(bucket) << 8),
              std::span<float>(bucket_rows_).subspan(row * dim_, dim_));
  bucket_ids_.push_back(bucket);
  bucket_rows_index_.emplace(bucket, row);
  return row;
}

void EmbeddingTable::add_bucket(std::uint32_t bucket, std::span<const float> values) {
  const std::size_t row = bucket_ids_.size();
  bucket_rows_.insert(bucket_rows_.end(), values.begin(), values.end());
  bucket_ids_.push_back(bucket);
  bucket_rows_index_.emplace(bucket, row);
}

std::span<float> EmbeddingTable::bucket_row(std::size_t row) {
  return std::span<float>(bucket_rows_).subspan(row * dim_, dim_);
}

std::span<const float> EmbeddingTable::bucket_row(std::size_t row) const {
  return std::span<const float>(bucket_rows_).subspan(row * dim_, dim_);
}

std::vector<std::uint32_t> EmbeddingTable::buckets_for(std::string_view token) const {
  std::vector<std::uint32_t> out;
  for (const auto& g : character_ngrams(token, spec_)) {
    out.push_back(ngram_hash(g) % spec_.bucket_count);
  }
  return out;
}

EmbeddingTable::Lookup EmbeddingTable::lookup(std::string_view token) const {
  Lookup result;
  result.vector.assign(dim_, 0.0f);
  std::vector<float> scratch(dim_);
  const auto buckets = buckets_for(token);
  for (std::uint32_t b : buckets) {
    auto it = bucket_rows_index_.find(b);
    std::span<const float> row;
    if (it != bucket_rows_index_.end()) {
      row = bucket_row(it->second);
    } else {
      initial_row(kBucketStream ^ (static_cast<std::uint64_t>(b) << 8), scratch);
      row = scratch;
    }
    for (std::size_t k = 0; k < dim_; ++k) result.vector[k] += row[k];
  }
  if (auto index = word_index(token)) {
    const auto row = word_row(*index);
    for (std::size_t k = 0; k < dim_; ++k) result.vector[k] += row[k];
    result.in_vocabulary = true;
  } else if (buckets.empty()) {
    result.degenerate = true;
  } else {
    const float inv = 1.0f / static_cast<float>(buckets.size());
    for (float& v : result.vector) v *= inv;
  }
  for (float& v : result.vector) {
    if (!std::isfinite(v)) v = 0.0f;
  }
  return result;
}

std::vector<float> embed_token(const EmbeddingTable& table, std::string_view token,
                               bool* warning) {
  auto result = table.lookup(token);
  if (warning) *warning = result.degenerate;
  return std::move(result.vector);
}

void EmbeddingTable::save(const std::filesystem::path& path, std::uint64_t config_hash) const {
  BinaryWriter w(path);
  w.magic("MGTE");
  w.u32(kTableVersion);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u32(static_cast<std::uint32_t>(vocab_.size()));
  w.u32(spec_.bucket_count);
  w.u32(static_cast<std::uint32_t>(spec_.min_n));
  w.u32(static_cast<std::uint32_t>(spec_.max_n));
  w.u64(init_seed_);
  w.u64(config_hash);
  for (const auto& token : vocab_) w.string(token);
  w.f32s(word_rows_);
  std::vector<std::size_t> order(bucket_ids_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return bucket_ids_[a] < bucket_ids_[b]; });
  w.u32(static_cast<std::uint32_t>(order.size()));
  for (std::size_t row : order) {
    w.u32(bucket_ids_[row]);
    w.f32s(bucket_row(row));
  }
  w.finish();
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path, std::uint64_t* config_hash) {
  BinaryReader r(path);
  r.expect_magic("MGTE");
  const std::uint32_t version = r.u32();
  if (version != kTableVersion) {
    throw Error(ErrorCode::kMalformedRecord, "unsupported token table version " + std::to_string(version));
  }
  const std::size_t dim = r.u32();
  const std::size_t vocab = r.u32();
  SubwordSpec spec;
  spec.bucket_count = r.u32();
  spec.min_n = r.u32();
  spec.max_n = r.u32();
  const std::uint64_t seed = r.u64();
  const std::uint64_t hash = r.u64();
  if (config_hash) *config_hash = hash;
  EmbeddingTable table(dim, spec, seed);
  table.vocab_.reserve(vocab);
  for (std::size_t i = 0; i < vocab; ++i) {
    table.vocab_.push_back(r.string());
    table.word_ids_.emplace(table.vocab_.back(), i);
  }
  table.word_rows_.resize(vocab * dim);
  r.f32s(table.word_rows_);
  const std::size_t buckets = r.u32();
  std::vector<float> row(dim);
  for (std::size_t i = 0; i < buckets; ++i) {
    const std::uint32_t id = r.u32();
    r.f32s(row);
    table.add_bucket(id, row);
  }
  return table;
}

}  // namespace mathgcl
